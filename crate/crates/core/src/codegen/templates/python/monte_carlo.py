

def train_monte_carlo(env, hp, seed):
    rng = SplitMix64(seed)
    n = len(env.states)
    q = [[0.0] * n for _ in range(n)]
    counts = [[0] * n for _ in range(n)]
    for _ in range(hp["total_episodes"]):
        s = env.reset(rng)
        if s is None:
            continue
        episode = []
        for _ in range(env.step_cap):
            a = choose(q, env, s, hp["epsilon"], rng)
            nxt, r, done = env.step(s, a)
            episode.append((s, nxt, r))
            if done:
                break
            s = nxt
        returns = [0.0] * len(episode)
        g = 0.0
        for i in reversed(range(len(episode))):
            g = episode[i][2] + hp["gamma"] * g
            returns[i] = g
        seen = set()
        for (st, nx, _), g in zip(episode, returns):
            if (st, nx) in seen:
                continue
            seen.add((st, nx))
            counts[st][nx] += 1
            q[st][nx] += (g - q[st][nx]) / counts[st][nx]
    return q
