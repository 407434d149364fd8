
    static double[][] trainQLearning(double[] hp, long episodes, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        int[] starts = startStates();
        double[][] q = new double[STATES.length][STATES.length];
        for (long e = 0; e < episodes; e++) {
            int s = reset(starts, rng);
            if (s < 0) {
                continue;
            }
            for (int step = 0; step < STEP_CAP; step++) {
                int next = ACTIONS[s][choose(q, s, hp[2], rng)];
                boolean done = TERMINAL[next];
                double bootstrap = 0.0;
                if (!done) {
                    bootstrap = q[next][ACTIONS[next][0]];
                    for (int succ : ACTIONS[next]) {
                        bootstrap = Math.max(bootstrap, q[next][succ]);
                    }
                }
                double target = REWARDS[s][next] + hp[1] * bootstrap;
                q[s][next] += hp[0] * (target - q[s][next]);
                if (done) {
                    break;
                }
                s = next;
            }
        }
        return q;
    }
