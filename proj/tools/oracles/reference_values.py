"""Reference values frozen into the unit tests.

Computed with numpy/scipy, independently of the C++ code. Rerun with
`python3 tools/oracles/reference_values.py` and paste the output.
"""

import numpy as np
from scipy import integrate, stats


def ssm_flat_prior(phi, sigma2, omega2, y):
    """c, v_n and y_{n+1} posteriors under pi(c) = 1, by integrating c out by hand."""
    n = len(y)
    t = np.arange(1, n + 1)
    mu = np.array([sum(phi**k for k in range(i)) for i in t])
    sig = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            s, u = t[i], t[j]
            sig[i, j] = sigma2 * sum(phi ** (s - k) * phi ** (u - k) for k in range(1, min(s, u) + 1))
    w = sig + omega2 * np.eye(n)
    wi = np.linalg.inv(w)
    var_c = 1.0 / (mu @ wi @ mu)
    mean_c = var_c * (mu @ wi @ y)
    g = sig[n - 1] @ wi
    lever = mu[n - 1] - g @ mu
    mean_v = mean_c * mu[n - 1] + g @ (y - mean_c * mu)
    var_v = sig[n - 1, n - 1] - g @ sig[n - 1] + lever**2 * var_c
    cov_cv = lever * var_c
    mean_p = mean_c + phi * mean_v
    var_p = var_c + phi**2 * var_v + 2 * phi * cov_cv + sigma2 + omega2
    return mean_c, var_c, mean_v, var_v, mean_p, var_p


def markov_acceptance(c, phi, sigma2, n, yn, h):
    """P(|z_n - y_n| <= h | c) with z_0 = 0."""
    m = c * sum(phi**k for k in range(n))
    v = sigma2 * sum(phi ** (2 * k) for k in range(n))
    sd = np.sqrt(v)
    return stats.norm.cdf(yn + h, m, sd) - stats.norm.cdf(yn - h, m, sd)


def single_event(z, theta, dt):
    """Probability that exactly one event happens in [0, dt] and it is of each type."""
    z1, z2 = z
    rates = [theta[0] * z1, theta[1] * z1 * z2, theta[2] * z2]
    total = sum(rates)
    moves = [(1, 0), (-1, 1), (0, -1)]
    out = []
    for r, (d1, d2) in zip(rates, moves):
        a1, a2 = z1 + d1, z2 + d2
        after = theta[0] * a1 + theta[1] * a1 * a2 + theta[2] * a2
        f = lambda s: np.exp(-total * s) * np.exp(-after * (dt - s))
        val, _ = integrate.quad(f, 0.0, dt, epsabs=1e-16, epsrel=1e-12)
        out.append(r * val)
    return out


def mg1_first_wait(theta, gap, draws, seed):
    """Waiting time of customer n+1 from x_n = v_n + gap by the queue recursion."""
    rng = np.random.default_rng(seed)
    w = rng.exponential(1.0 / theta[2], draws)
    u = rng.uniform(theta[0], theta[1], draws)
    v_next = w
    x_next = np.maximum(gap, v_next) + u
    omega = x_next - v_next
    exact_mean = 0.5 * (theta[0] + theta[1]) + gap - (1 - np.exp(-theta[2] * gap)) / theta[2]
    return omega.mean(), omega.var(), exact_mean


def main():
    ys = [0.3, 1.1, 0.7, 1.9, 1.4, 2.2, 1.6, 2.5]
    for n in (3, 5, 8):
        vals = ssm_flat_prior(0.5, 1.0, 0.5, np.array(ys[:n]))
        print(f"ssm n={n}:", ", ".join(f"{v:.17g}" for v in vals))
    print("acceptance c=1 phi=0.5 n=10 yn=2 h=0.1:", f"{markov_acceptance(1.0, 0.5, 1.0, 10, 2.0, 0.1):.17g}")
    print("acceptance c=0.02 phi=1.5 n=10 yn=3 h=0.1:", f"{markov_acceptance(0.02, 1.5, 1.0, 10, 3.0, 0.1):.17g}")
    p = single_event((100, 50), (1.0, 0.005, 0.6), 1e-4)
    print("lv single-event probabilities:", ", ".join(f"{v:.17g}" for v in p))
    m, v, exact = mg1_first_wait((4.0, 7.0, 0.15), 3.0, 1_000_000, 7)
    print("mg1 first wait gap=3: mc mean", f"{m:.6f}", "mc var", f"{v:.6f}", "exact mean", f"{exact:.17g}")


if __name__ == "__main__":
    main()
