

class {{NAME}}:
    STATES = {{STATES}}
    ACTIONS = {{ACTIONS}}
    REWARDS = {{REWARDS}}
    TERMINAL = {{TERMINAL}}
    ALGORITHM = "{{ALGORITHM}}"
    SETTINGS = {{SETTINGS}}

    def run(self, seed=0):
        env = Environment(self.STATES, self.ACTIONS, self.REWARDS, self.TERMINAL)
        table = {{TRAINER}}(env, self.SETTINGS, seed)
        text = render_result(env, table, derive_policy(env, table))
        sys.stdout.write(text)
        return text


if __name__ == "__main__":
    {{NAME}}().run(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
