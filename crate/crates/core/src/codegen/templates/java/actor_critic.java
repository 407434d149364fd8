
    static double[] softmax(double[] prefs) {
        double top = Double.NEGATIVE_INFINITY;
        for (double p : prefs) {
            top = Math.max(top, p);
        }
        double[] out = new double[prefs.length];
        double total = 0.0;
        for (int i = 0; i < prefs.length; i++) {
            out[i] = Math.exp(prefs[i] - top);
            total += out[i];
        }
        for (int i = 0; i < out.length; i++) {
            out[i] /= total;
        }
        return out;
    }

    static int sample(double[] probs, SplitMix64 rng) {
        double u = rng.nextF64();
        double acc = 0.0;
        for (int i = 0; i < probs.length; i++) {
            acc += probs[i];
            if (u < acc) {
                return i;
            }
        }
        return probs.length - 1;
    }

    static double[][] trainActorCritic(double[] hp, long episodes, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        int[] starts = startStates();
        double[] v = new double[STATES.length];
        double[][] h = new double[STATES.length][STATES.length];
        for (long e = 0; e < episodes; e++) {
            int s = reset(starts, rng);
            if (s < 0) {
                continue;
            }
            for (int step = 0; step < STEP_CAP; step++) {
                int[] row = ACTIONS[s];
                double[] prefs = new double[row.length];
                for (int i = 0; i < row.length; i++) {
                    prefs[i] = h[s][row[i]];
                }
                double[] probs = softmax(prefs);
                int a = sample(probs, rng);
                int next = row[a];
                boolean done = TERMINAL[next];
                double nextValue = done ? 0.0 : v[next];
                double delta = REWARDS[s][next] + hp[1] * nextValue - v[s];
                v[s] += hp[3] * delta;
                for (int b = 0; b < row.length; b++) {
                    double indicator = b == a ? 1.0 : 0.0;
                    h[s][row[b]] += hp[0] * delta * (indicator - probs[b]);
                }
                if (done) {
                    break;
                }
                s = next;
            }
        }
        return h;
    }
