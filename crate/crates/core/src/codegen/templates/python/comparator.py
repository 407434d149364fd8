

TRAINERS = {
{{TRAINERS}}
}


class {{NAME}}:
    STATES = {{STATES}}
    ACTIONS = {{ACTIONS}}
    REWARDS = {{REWARDS}}
    TERMINAL = {{TERMINAL}}
    AGENTS = [
{{AGENTS}}
    ]

    def run(self, seed=0):
        env = Environment(self.STATES, self.ACTIONS, self.REWARDS, self.TERMINAL)
        blocks = []
        for k, (algorithm, settings) in enumerate(self.AGENTS):
            started = time.perf_counter()
            table = TRAINERS[algorithm](env, settings, (seed + k) & MASK64)
            text = render_result(env, table, derive_policy(env, table))
            elapsed = int((time.perf_counter() - started) * 1000)
            blocks.append("=== %s#%d ===\n%swall_time_ms: %d\n" % (algorithm, k, text, elapsed))
        out = "\n".join(blocks)
        sys.stdout.write(out)
        return out


if __name__ == "__main__":
    {{NAME}}().run(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
