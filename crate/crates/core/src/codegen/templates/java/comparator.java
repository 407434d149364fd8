
    static double[][] train(int k, long seed) {
        switch (ALGORITHMS[k]) {
{{DISPATCH}}
            default:
                throw new IllegalStateException("unknown algorithm " + ALGORITHMS[k]);
        }
    }

    public String run(long seed) {
        StringBuilder out = new StringBuilder();
        for (int k = 0; k < ALGORITHMS.length; k++) {
            long started = System.nanoTime();
            double[][] table = train(k, seed + k);
            String text = renderResult(table, derivePolicy(table));
            long elapsed = (System.nanoTime() - started) / 1_000_000L;
            if (k > 0) {
                out.append('\n');
            }
            out.append("=== ").append(ALGORITHMS[k]).append('#').append(k).append(" ===\n");
            out.append(text).append("wall_time_ms: ").append(elapsed).append('\n');
        }
        System.out.print(out);
        return out.toString();
    }

    public static void main(String[] args) {
        long seed = args.length > 0 ? Long.parseUnsignedLong(args[0]) : 0L;
        new {{NAME}}().run(seed);
    }
}
