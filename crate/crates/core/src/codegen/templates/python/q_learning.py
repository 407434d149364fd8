

def train_q_learning(env, hp, seed):
    rng = SplitMix64(seed)
    n = len(env.states)
    q = [[0.0] * n for _ in range(n)]
    for _ in range(hp["total_episodes"]):
        s = env.reset(rng)
        if s is None:
            continue
        for _ in range(env.step_cap):
            a = choose(q, env, s, hp["epsilon"], rng)
            nxt, r, done = env.step(s, a)
            bootstrap = 0.0
            if not done:
                bootstrap = max(q[nxt][x] for x in env.allowed[nxt])
            target = r + hp["gamma"] * bootstrap
            q[s][nxt] += hp["alpha"] * (target - q[s][nxt])
            if done:
                break
            s = nxt
    return q
