
    public String run(long seed) {
        double[][] table = {{TRAINER}}(SETTINGS[0], EPISODES[0], seed);
        String text = renderResult(table, derivePolicy(table));
        System.out.print(text);
        return text;
    }

    public static void main(String[] args) {
        long seed = args.length > 0 ? Long.parseUnsignedLong(args[0]) : 0L;
        new {{NAME}}().run(seed);
    }
}
