"""
   The MIT License (MIT)

   Copyright (C) 2026 The dyncal developers

   Permission is hereby granted, free of charge, to any person obtaining a copy
   of this software and associated documentation files (the "Software"), to deal
   in the Software without restriction, including without limitation the rights
   to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
   copies of the Software, and to permit persons to whom the Software is
   furnished to do so, subject to the following conditions:

   The above copyright notice and this permission notice shall be included in
   all copies or substantial portions of the Software.

   THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
   IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
   FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
   AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
   LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
   OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
   THE SOFTWARE.
"""
import concurrent.futures
import math

import numpy as np
from scipy import linalg
from scipy.linalg import lapack

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.errors import InvalidInputError, NumericalError
from dyncal.gaussianprocess import GaussianProcess
from dyncal.globals import DELTA_RANGE, SIGMA_RANGE, SIGMA_U_TILDE_RANGE
from dyncal.globals import DEFAULT_THREADS, DESK_N_TRIALS, GRADIENT_TOLERANCE, LIKELIHOOD_TOLERANCE, MAX_GRADIENT_ITERATIONS
from dyncal.hyperparameters import Hyperparameters, ParameterRange
from dyncal.kernel import Kernel
from dyncal.outputbuffer import OutputBuffer


LOG_2PI = math.log(2.0 * math.pi)

# Armijo sufficient-increase constant and the smallest line search step tried.
ARMIJO_C1 = 1e-4
MIN_STEP = 1e-12


class SearchConfig:
    # pylint: disable=too-many-instance-attributes
    def __init__(self, n_trials: int = DESK_N_TRIALS, rng_seed: int = 0) -> None:
        if n_trials < 1:
            raise InvalidInputError('the number of trials must be 1 or greater: %r' % n_trials)

        self.n_trials = int(n_trials)
        self.delta = ParameterRange(*DELTA_RANGE)
        self.sigma = ParameterRange(*SIGMA_RANGE)
        self.sigma_u_tilde = ParameterRange(*SIGMA_U_TILDE_RANGE)
        self.rng_seed = int(rng_seed)
        self.max_iterations = MAX_GRADIENT_ITERATIONS
        self.tolerance = GRADIENT_TOLERANCE
        self.likelihood_tolerance = LIKELIHOOD_TOLERANCE  # Relative; 0 disables the stop.
        self.max_log_step = 1.0  # Largest move of any log-parameter in one step.
        self.centered = True  # False: the literal uncentered likelihood, for comparison only.
        self.threads = DEFAULT_THREADS

    @property
    def ranges(self) -> Tuple[ParameterRange, ParameterRange, ParameterRange]:
        return self.delta, self.sigma, self.sigma_u_tilde

    def initial_theta(self) -> Hyperparameters:
        return Hyperparameters(self.delta.initial_guess, self.sigma.initial_guess, self.sigma_u_tilde.initial_guess)

    def log_bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        lo = np.array([r.log_bounds()[0] for r in self.ranges])
        hi = np.array([r.log_bounds()[1] for r in self.ranges])
        return lo, hi

    def trial_starts(self) -> List[np.ndarray]:
        '''Log-space starting points: the initial guesses first, then independent log-uniform draws over each range.

        Draws are made sequentially from one generator, so the first n starts are the same for any n_trials >= n.'''
        rng = np.random.default_rng(self.rng_seed)
        lo, hi = self.log_bounds()
        starts = [self.initial_theta().to_log()]
        for _ in range(1, self.n_trials):
            starts.append(rng.uniform(lo, hi))
        return starts

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_trials': self.n_trials,
            'delta': self.delta.to_list(),
            'sigma': self.sigma.to_list(),
            'sigma_u_tilde': self.sigma_u_tilde.to_list(),
            'rng_seed': self.rng_seed,
            'max_iterations': self.max_iterations,
            'tolerance': self.tolerance,
            'likelihood_tolerance': self.likelihood_tolerance,
            'centered': self.centered,
        }


class TrialResult:
    def __init__(self, index: int, start: Hyperparameters) -> None:
        self.index = index
        self.start = start
        self.theta: Optional[Hyperparameters] = None
        self.log_likelihood = -math.inf
        self.iterations = 0
        self.gradient_norm = math.inf
        self.stop_reason = ''  # One of: 'gradient', 'likelihood', 'line-search', 'max-iterations', 'failed'.
        self.error = ''

    @property
    def failed(self) -> bool:
        return self.stop_reason == 'failed'

    @property
    def converged(self) -> bool:
        '''True when the trial stopped on a tolerance rather than on the iteration limit or a failure.'''
        return self.stop_reason in ('gradient', 'likelihood', 'line-search')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'trial': self.index,
            'start': self.start.to_dict(),
            'theta': None if self.theta is None else self.theta.to_dict(),
            'log_likelihood': self.log_likelihood,
            'iterations': self.iterations,
            'gradient_norm': self.gradient_norm,
            'converged': self.converged,
            'stop_reason': self.stop_reason,
            'error': self.error,
        }


class FitResult:
    def __init__(self, theta: Hyperparameters, log_likelihood: float, trials: List[TrialResult]) -> None:
        self.theta = theta
        self.log_likelihood = log_likelihood
        self.trials = trials

    @property
    def best_trial(self) -> int:
        for t in self.trials:
            if t.theta == self.theta and t.log_likelihood == self.log_likelihood:
                return t.index
        return -1


def _residual(u: np.ndarray, centered: bool) -> np.ndarray:
    return u - np.mean(u) if centered else u.copy()


def _factor(d2: np.ndarray, theta: Hyperparameters) -> Tuple[np.ndarray, np.ndarray]:
    Ku = Kernel.from_sq_dists(d2, theta.delta, theta.sigma)
    K = Ku.copy()
    K[np.diag_indices_from(K)] += theta.sigma_u_tilde ** 2
    L, _ = GaussianProcess.factorize(K)
    return Ku, L


def _log_likelihood(L: np.ndarray, r: np.ndarray) -> Tuple[float, np.ndarray]:
    alpha = linalg.cho_solve((L, True), r, check_finite=False)
    log_det = 2.0 * float(np.sum(np.log(np.diag(L))))
    ll = -0.5 * (float(r @ alpha) + log_det + r.size * LOG_2PI)
    return ll, alpha


def _inverse(L: np.ndarray) -> np.ndarray:
    '''Lower triangle (diagonal included) of the inverse covariance, from its Cholesky factor.'''
    inv, info = lapack.dpotri(L, lower=1)
    if info != 0:
        raise NumericalError('inverting the factorized covariance failed (LAPACK info %d)' % info)
    return np.tril(inv)


def _trace_product(K_inv_lower: np.ndarray, M: np.ndarray) -> float:
    '''tr(K^-1 M) for symmetric M, using the lower triangle of K^-1 only.'''
    return 2.0 * float(np.sum(K_inv_lower * M)) - float(np.diag(K_inv_lower) @ np.diag(M))


def _gradient(d2: np.ndarray, Ku: np.ndarray, L: np.ndarray, alpha: np.ndarray, theta: Hyperparameters) -> np.ndarray:
    # dL/dtheta_j = 0.5 * (alpha^T dK/dtheta_j alpha - tr(K^-1 dK/dtheta_j)), for log-parameters.
    K_inv = _inverse(L)
    D = Ku * (d2 / theta.delta ** 2)

    g_delta = 0.5 * (float(alpha @ D @ alpha) - _trace_product(K_inv, D))
    g_sigma = float(alpha @ Ku @ alpha) - _trace_product(K_inv, Ku)
    g_noise = theta.sigma_u_tilde ** 2 * (float(alpha @ alpha) - float(np.sum(np.diag(K_inv))))
    return np.array([g_delta, g_sigma, g_noise])


def _check_data(Z: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    u = np.asarray(u, dtype=float).ravel()
    if Z.shape[0] != u.size or u.size < 1:
        raise InvalidInputError('%d feature vectors but %d references' % (Z.shape[0], u.size))
    return Z, u


def log_marginal_likelihood(Z: np.ndarray, u: np.ndarray, theta: Hyperparameters, centered: bool = True) -> float:
    '''Log marginal likelihood of the normalized references u given normalized features Z.'''
    Z, u = _check_data(Z, u)
    _, L = _factor(Kernel.sq_dists(Z, Z), theta)
    ll, _ = _log_likelihood(L, _residual(u, centered))
    return ll


def likelihood_gradient(Z: np.ndarray, u: np.ndarray, theta: Hyperparameters, centered: bool = True) -> np.ndarray:
    '''Gradient of the log marginal likelihood with respect to (log delta, log sigma, log sigma_u_tilde).'''
    Z, u = _check_data(Z, u)
    d2 = Kernel.sq_dists(Z, Z)
    Ku, L = _factor(d2, theta)
    _, alpha = _log_likelihood(L, _residual(u, centered))
    return _gradient(d2, Ku, L, alpha, theta)


class _Objective:
    '''Likelihood and gradient over log-parameters for one dataset, sharing the pairwise distances.'''

    def __init__(self, Z: np.ndarray, u: np.ndarray, centered: bool) -> None:
        self.d2 = Kernel.sq_dists(Z, Z)
        self.r = _residual(u, centered)

    def value(self, x: np.ndarray) -> float:
        try:
            _, L = _factor(self.d2, Hyperparameters.from_log(x))
        except (NumericalError, InvalidInputError):
            return -math.inf
        return _log_likelihood(L, self.r)[0]

    def value_and_gradient(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        theta = Hyperparameters.from_log(x)
        Ku, L = _factor(self.d2, theta)
        ll, alpha = _log_likelihood(L, self.r)
        return ll, _gradient(self.d2, Ku, L, alpha, theta)


def _projected(x: np.ndarray, g: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    '''Zeroes gradient components that push against an active bound.'''
    pg = g.copy()
    pg[(x <= lo) & (g < 0.0)] = 0.0
    pg[(x >= hi) & (g > 0.0)] = 0.0
    return pg


def _to_theta(x: np.ndarray, config: SearchConfig) -> Hyperparameters:
    # exp(log(bound)) may land one ulp outside of the range.
    values = [min(max(math.exp(float(v)), r.lo), r.hi) for v, r in zip(x, config.ranges)]
    return Hyperparameters(values[0], values[1], values[2])


def _run_trial(objective: _Objective, index: int, x0: np.ndarray, config: SearchConfig) -> TrialResult:
    lo, hi = config.log_bounds()
    x = np.clip(x0, lo, hi)
    result = TrialResult(index, _to_theta(x, config))

    try:
        ll, g = objective.value_and_gradient(x)
    except (NumericalError, InvalidInputError) as e:
        result.stop_reason = 'failed'
        result.error = str(e)
        return result

    step = config.max_log_step
    result.stop_reason = 'max-iterations'
    for it in range(config.max_iterations):
        pg = _projected(x, g, lo, hi)
        gnorm = float(np.linalg.norm(pg))
        result.iterations = it
        if gnorm < config.tolerance:
            result.stop_reason = 'gradient'
            break

        # Backtracking (Armijo) line search along the projected gradient.
        t = min(2.0 * step, config.max_log_step / float(np.max(np.abs(pg))))
        accepted = False
        while t >= MIN_STEP:
            x_new = np.clip(x + t * pg, lo, hi)
            ll_new = objective.value(x_new)
            if ll_new >= ll + ARMIJO_C1 * float(pg @ (x_new - x)) and ll_new > -math.inf:
                accepted = True
                break
            t *= 0.5

        if not accepted:
            result.stop_reason = 'line-search'
            break

        step = t
        ll_old = ll
        try:
            ll, g = objective.value_and_gradient(x_new)
        except (NumericalError, InvalidInputError):
            result.stop_reason = 'line-search'
            break
        x = x_new
        if ll - ll_old <= config.likelihood_tolerance * max(1.0, abs(ll)):
            result.stop_reason = 'likelihood'
            result.iterations = it + 1
            break
    else:
        result.iterations = config.max_iterations

    result.theta = _to_theta(x, config)
    result.log_likelihood = ll
    result.gradient_norm = float(np.linalg.norm(_projected(x, g, lo, hi)))
    return result


def fit(Z: np.ndarray, u: np.ndarray, config: SearchConfig, out: Optional[OutputBuffer] = None) -> FitResult:
    '''Empirical Bayes: multi-start gradient ascent of the log marginal likelihood in log-parameter space.

    Returns the best trial (lowest trial index among equal likelihoods) and the per-trial log.'''
    Z, u = _check_data(Z, u)
    objective = _Objective(Z, u, config.centered)
    starts = config.trial_starts()

    results: List[Optional[TrialResult]] = [None] * len(starts)
    if config.threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.threads) as executor:
            future_to_index = {executor.submit(_run_trial, objective, i, x0, config): i for i, x0 in enumerate(starts)}
            for future in concurrent.futures.as_completed(future_to_index):
                results[future_to_index[future]] = future.result()
    else:
        for i, x0 in enumerate(starts):
            results[i] = _run_trial(objective, i, x0, config)

    trials = [r for r in results if r is not None]
    best: Optional[TrialResult] = None
    for trial in trials:
        if out is not None:
            if trial.failed:
                out.d('Trial %d failed: %s' % (trial.index, trial.error))
            else:
                out.d('Trial %d: %s -> log-likelihood %.6f after %d iteration(s) (%s)' % (trial.index, trial.theta, trial.log_likelihood, trial.iterations, trial.stop_reason))
        if trial.failed or trial.theta is None:
            continue
        if best is None or trial.log_likelihood > best.log_likelihood:
            best = trial

    if best is None or best.theta is None:
        raise NumericalError('all %d hyperparameter trials failed to factorize the covariance matrix' % len(trials))

    if out is not None:
        out.v('Best of %d trial(s): trial %d, %s, log-likelihood %.6f' % (len(trials), best.index, best.theta, best.log_likelihood))
    return FitResult(best.theta, best.log_likelihood, trials)
