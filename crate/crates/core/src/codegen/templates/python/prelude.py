#!/usr/bin/env python3
# {{NAME}}: generated from an RLML model. Uses the Python standard library only.
import math
import sys
import time

MASK64 = (1 << 64) - 1


class SplitMix64:
    """Seedable 64-bit generator; the same stream as the rlml engine."""

    def __init__(self, seed):
        self.state = seed & MASK64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_f64(self):
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def below(self, n):
        return min(int(self.next_f64() * n), n - 1)


class Environment:
    def __init__(self, states, actions, rewards, terminal):
        self.states = states
        self.allowed = actions
        self.rewards = rewards
        self.terminal = terminal
        self.starts = [s for s in range(len(states)) if not terminal[s]]
        self.step_cap = 100 * len(states)

    def reset(self, rng):
        if not self.starts:
            return None
        return self.starts[rng.below(len(self.starts))]

    def step(self, s, a):
        nxt = self.allowed[s][a]
        return nxt, self.rewards[s][nxt], self.terminal[nxt]


def choose(q, env, s, epsilon, rng):
    row = env.allowed[s]
    if epsilon > 0.0 and rng.next_f64() < epsilon:
        return rng.below(len(row))
    best = 0
    for i in range(1, len(row)):
        if q[s][row[i]] > q[s][row[best]]:
            best = i
    return best


def derive_policy(env, table):
    policy = []
    for s in range(len(env.states)):
        row = env.allowed[s]
        if env.terminal[s] or not row:
            policy.append(None)
            continue
        best = 0
        for i in range(1, len(row)):
            if table[s][row[i]] > table[s][row[best]]:
                best = i
        policy.append(row[best])
    return policy


def render_result(env, table, policy):
    lines = ["Q-Table:"]
    for s, name in enumerate(env.states):
        cells = ", ".join("%.2f" % v for v in table[s])
        lines.append("%s: [%s]" % (name, cells))
    lines.append("")
    lines.append("Policy:")
    for s, nxt in enumerate(policy):
        if nxt is not None:
            lines.append("%s -> %s" % (env.states[s], env.states[nxt]))
    return "\n".join(lines) + "\n"
