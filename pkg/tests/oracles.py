"""Brute-force reference implementations, written against ``math`` only.

These deliberately avoid any vectorised library code so they stay an
independent check on association and SINR.
"""
import math

TERRESTRIAL, BIG, SMALL = 0, 1, 2


def pathloss_db(h, r, env, f, c):
    theta = 90.0 if r == 0 else math.degrees(math.atan(h / r))
    p = 1.0 / (1.0 + env.a * math.exp(-env.b * (theta - env.a)))
    fspl = 20 * math.log10(4 * math.pi * f * math.sqrt(h * h + r * r) / c)
    return p * (fspl + env.eta_los_db) + (1 - p) * (fspl + env.eta_nlos_db)


def link_power(user, node, kind, altitude, power, env, radio, fade=1.0):
    r = math.dist(user, node)
    if kind == TERRESTRIAL:
        return power * fade * max(r, 1.0) ** (-radio.path_loss_exponent)
    L = pathloss_db(altitude, r, env, radio.carrier_frequency_hz, radio.light_speed)
    return power * 10 ** (-L / 10)


def brute_associate(dep, env, radio):
    serving = []
    for u in dep.users:
        best, best_j = -1.0, -1
        for j in range(dep.n_nodes):
            p = link_power(u, dep.node_xy[j], dep.node_kind[j], dep.node_altitude[j],
                           dep.node_power[j], env, radio)
            if p > best:
                best, best_j = p, j
        serving.append(best_j)
    load = [serving.count(j) for j in range(dep.n_nodes)]
    return serving, load


def brute_sinr(dep, serving, load, env, radio):
    out = []
    for i, u in enumerate(dep.users):
        def pw(j):
            fade = dep.fades[i, j] if dep.node_kind[j] == TERRESTRIAL else 1.0
            return link_power(u, dep.node_xy[j], dep.node_kind[j], dep.node_altitude[j],
                              dep.node_power[j], env, radio, fade)

        signal = pw(serving[i])
        interference = math.fsum(
            pw(j) for j in range(dep.n_nodes) if j != serving[i] and load[j] > 0
        )
        out.append(signal / (radio.noise_power + interference))
    return out
