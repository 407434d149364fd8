// {{NAME}}: generated from an RLML model. Uses the Java standard library only.
import java.math.BigDecimal;
import java.math.RoundingMode;
import java.util.ArrayList;
import java.util.List;

public class {{NAME}} {
    static final String[] STATES = {{STATES}};
    static final int[][] ACTIONS = {{ACTIONS}};
    static final double[][] REWARDS = {{REWARDS}};
    static final boolean[] TERMINAL = {{TERMINAL}};
    static final int STEP_CAP = 100 * STATES.length;

    /** Agents in model order; settings are {alpha, gamma, epsilon, critic rate}. */
    static final String[] ALGORITHMS = {{ALGORITHMS}};
    static final double[][] SETTINGS = {{SETTINGS}};
    static final long[] EPISODES = {{EPISODES}};

    /** Seedable 64-bit generator; the same stream as the rlml engine. */
    static final class SplitMix64 {
        private long state;

        SplitMix64(long seed) {
            state = seed;
        }

        long nextU64() {
            state += 0x9E3779B97F4A7C15L;
            long z = state;
            z = (z ^ (z >>> 30)) * 0xBF58476D1CE4E5B9L;
            z = (z ^ (z >>> 27)) * 0x94D049BB133111EBL;
            return z ^ (z >>> 31);
        }

        double nextF64() {
            return (nextU64() >>> 11) * 0x1.0p-53;
        }

        int below(int n) {
            return Math.min((int) (nextF64() * n), n - 1);
        }
    }

    static int[] startStates() {
        List<Integer> starts = new ArrayList<>();
        for (int s = 0; s < STATES.length; s++) {
            if (!TERMINAL[s]) {
                starts.add(s);
            }
        }
        int[] out = new int[starts.size()];
        for (int i = 0; i < out.length; i++) {
            out[i] = starts.get(i);
        }
        return out;
    }

    static int reset(int[] starts, SplitMix64 rng) {
        if (starts.length == 0) {
            return -1;
        }
        return starts[rng.below(starts.length)];
    }

    static int bestIndex(double[][] table, int s) {
        int[] row = ACTIONS[s];
        int best = 0;
        for (int i = 1; i < row.length; i++) {
            if (table[s][row[i]] > table[s][row[best]]) {
                best = i;
            }
        }
        return best;
    }

    static int choose(double[][] q, int s, double epsilon, SplitMix64 rng) {
        if (epsilon > 0.0 && rng.nextF64() < epsilon) {
            return rng.below(ACTIONS[s].length);
        }
        return bestIndex(q, s);
    }

    static int[] derivePolicy(double[][] table) {
        int[] policy = new int[STATES.length];
        for (int s = 0; s < STATES.length; s++) {
            policy[s] = (TERMINAL[s] || ACTIONS[s].length == 0) ? -1 : ACTIONS[s][bestIndex(table, s)];
        }
        return policy;
    }

    static String fmt2(double v) {
        String text = new BigDecimal(v).setScale(2, RoundingMode.HALF_EVEN).toPlainString();
        boolean negative = v < 0.0 || (v == 0.0 && 1.0 / v < 0.0);
        return (negative && !text.startsWith("-")) ? "-" + text : text;
    }

    static String renderResult(double[][] table, int[] policy) {
        StringBuilder out = new StringBuilder("Q-Table:\n");
        for (int s = 0; s < STATES.length; s++) {
            out.append(STATES[s]).append(": [");
            for (int j = 0; j < table[s].length; j++) {
                if (j > 0) {
                    out.append(", ");
                }
                out.append(fmt2(table[s][j]));
            }
            out.append("]\n");
        }
        out.append("\nPolicy:\n");
        for (int s = 0; s < STATES.length; s++) {
            if (policy[s] >= 0) {
                out.append(STATES[s]).append(" -> ").append(STATES[policy[s]]).append('\n');
            }
        }
        return out.toString();
    }
