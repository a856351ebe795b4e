import numpy as np
from scipy import stats


def chi_square_pvalue(counts, probs):
    """Goodness-of-fit p-value, merging cells until expected counts >= 5."""
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    expected = np.asarray(probs, dtype=float) * n
    order = np.argsort(expected)
    counts, expected = counts[order], expected[order]
    merged_c, merged_e = [], []
    acc_c = acc_e = 0.0
    for c, e in zip(counts, expected):
        acc_c += c
        acc_e += e
        if acc_e >= 5.0:
            merged_c.append(acc_c)
            merged_e.append(acc_e)
            acc_c = acc_e = 0.0
    if acc_e > 0 and merged_e:
        merged_c[-1] += acc_c
        merged_e[-1] += acc_e
    merged_c = np.asarray(merged_c)
    merged_e = np.asarray(merged_e)
    merged_e *= merged_c.sum() / merged_e.sum()
    return stats.chisquare(merged_c, merged_e).pvalue


def brute_force_s(emp, g, dom, lambda_eff, node):
    """Node weight s(a, b) by plain Python loops (test oracle)."""
    total = 0.0
    for i in range(emp.K):
        z = (
            sum(int(ai) * int(xi) for ai, xi in zip(node.a, emp.points[i])) - node.b
        ) % dom.P
        reweighted = emp.probs[i] * emp.labels[i] / (lambda_eff + emp.probs[i])
        total += dom.P ** (-float(dom.D)) * g.values[z] * reweighted
    return total * total


def brute_force_q(emp, g, dom, lambda_eff, node):
    """Proposal probability q(a, b) by plain Python loops (test oracle)."""
    gamma = 0.0
    total = 0.0
    scale = dom.P ** (-float(dom.D))
    for i in range(emp.K):
        phi = dom.P ** (-dom.D / 2.0) * emp.probs[i] * emp.labels[i] / (
            lambda_eff + emp.probs[i]
        )
        gamma += phi * phi
        z = (
            sum(int(ai) * int(xi) for ai, xi in zip(node.a, emp.points[i])) - node.b
        ) % dom.P
        total += phi * phi * scale * g.values[z] ** 2
    return total / gamma
