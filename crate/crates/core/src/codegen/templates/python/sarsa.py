

def train_sarsa(env, hp, seed):
    rng = SplitMix64(seed)
    n = len(env.states)
    q = [[0.0] * n for _ in range(n)]
    for _ in range(hp["total_episodes"]):
        s = env.reset(rng)
        if s is None:
            continue
        a = choose(q, env, s, hp["epsilon"], rng)
        for _ in range(env.step_cap):
            nxt, r, done = env.step(s, a)
            bootstrap = 0.0
            if not done:
                next_a = choose(q, env, nxt, hp["epsilon"], rng)
                bootstrap = q[nxt][env.allowed[nxt][next_a]]
            target = r + hp["gamma"] * bootstrap
            q[s][nxt] += hp["alpha"] * (target - q[s][nxt])
            if done:
                break
            s = nxt
            a = next_a
    return q
