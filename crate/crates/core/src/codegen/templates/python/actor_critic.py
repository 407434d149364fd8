

def softmax(prefs):
    top = max(prefs)
    exps = [math.exp(p - top) for p in prefs]
    total = 0.0
    for e in exps:
        total += e
    return [e / total for e in exps]


def sample(probs, rng):
    u = rng.next_f64()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if u < acc:
            return i
    return len(probs) - 1


def train_actor_critic(env, hp, seed):
    rng = SplitMix64(seed)
    n = len(env.states)
    v = [0.0] * n
    h = [[0.0] * n for _ in range(n)]
    alpha = hp["alpha"]
    beta = hp["beta"] if hp["beta"] is not None else alpha
    for _ in range(hp["total_episodes"]):
        s = env.reset(rng)
        if s is None:
            continue
        for _ in range(env.step_cap):
            row = env.allowed[s]
            probs = softmax([h[s][x] for x in row])
            a = sample(probs, rng)
            nxt, r, done = env.step(s, a)
            next_value = 0.0 if done else v[nxt]
            delta = r + hp["gamma"] * next_value - v[s]
            v[s] += beta * delta
            for b, succ in enumerate(row):
                indicator = 1.0 if b == a else 0.0
                h[s][succ] += alpha * delta * (indicator - probs[b])
            if done:
                break
            s = nxt
    return h
