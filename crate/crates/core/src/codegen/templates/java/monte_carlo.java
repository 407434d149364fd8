
    static double[][] trainMonteCarlo(double[] hp, long episodes, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        int[] starts = startStates();
        int n = STATES.length;
        double[][] q = new double[n][n];
        long[][] counts = new long[n][n];
        for (long e = 0; e < episodes; e++) {
            int s = reset(starts, rng);
            if (s < 0) {
                continue;
            }
            List<int[]> moves = new ArrayList<>();
            for (int step = 0; step < STEP_CAP; step++) {
                int next = ACTIONS[s][choose(q, s, hp[2], rng)];
                moves.add(new int[] {s, next});
                if (TERMINAL[next]) {
                    break;
                }
                s = next;
            }
            double[] returns = new double[moves.size()];
            double g = 0.0;
            for (int i = moves.size() - 1; i >= 0; i--) {
                int[] m = moves.get(i);
                g = REWARDS[m[0]][m[1]] + hp[1] * g;
                returns[i] = g;
            }
            boolean[] seen = new boolean[n * n];
            for (int i = 0; i < moves.size(); i++) {
                int[] m = moves.get(i);
                if (seen[m[0] * n + m[1]]) {
                    continue;
                }
                seen[m[0] * n + m[1]] = true;
                counts[m[0]][m[1]] += 1;
                q[m[0]][m[1]] += (returns[i] - q[m[0]][m[1]]) / counts[m[0]][m[1]];
            }
        }
        return q;
    }
