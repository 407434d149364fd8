
    static double[][] trainSarsa(double[] hp, long episodes, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        int[] starts = startStates();
        double[][] q = new double[STATES.length][STATES.length];
        for (long e = 0; e < episodes; e++) {
            int s = reset(starts, rng);
            if (s < 0) {
                continue;
            }
            int a = choose(q, s, hp[2], rng);
            for (int step = 0; step < STEP_CAP; step++) {
                int next = ACTIONS[s][a];
                boolean done = TERMINAL[next];
                double bootstrap = 0.0;
                int nextA = -1;
                if (!done) {
                    nextA = choose(q, next, hp[2], rng);
                    bootstrap = q[next][ACTIONS[next][nextA]];
                }
                double target = REWARDS[s][next] + hp[1] * bootstrap;
                q[s][next] += hp[0] * (target - q[s][next]);
                if (done) {
                    break;
                }
                s = next;
                a = nextA;
            }
        }
        return q;
    }
