"""
Run reports and the parallel check runner behind the command-line front end.

A check is a named zero-argument callable returning a verifier outcome
(MoveVerification, ComplexCheck, ComplexCheck4, a bool or a CheckResult).
Checks run in a thread pool; results are kept in submission order so that a
fixed seed always yields the same report.
"""

import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from modules.core.alpha import (
    AlphaSystem,
    alpha_class,
    check_alpha_move,
    random_consistent_alpha,
    transport_alpha,
)
from modules.core.chain3d import ComplexCheck, check_complex
from modules.core.chain4d import (
    ComplexCheck4,
    alpha_affinity_check,
    check_complex_4d,
    conjectured_invariant_agrees,
    published_alpha_systems,
    published_24_weight,
    verify_move_24,
    verify_move_33,
)
from modules.core.errors import InconsistentAlphaError
from modules.core.moves import move_cluster
from modules.core.scalars import ZetaAssignment, to_scalar, zeta_samples
from modules.core.triangulation import Triangulation
from modules.core.weights3d import MoveVerification, verify_move_14, verify_move_23, verify_move_23_deg4

logger = logging.getLogger('pachnercalc.runner')

VERIFY_MOVES = ('2-3', '1-4', '2-3-deg4', '3-3', '2-4')

# vertices carried by each move cluster
MOVE_VERTICES = {'2-3': 5, '1-4': 5, '2-3-deg4': 5, '3-3': 6, '2-4': 6}

PUBLISHED_24_ZETA = (0, 1, 3, 8, 17, 21)

Check = Tuple[str, Callable[[], Any]]


@dataclass
class CheckResult:
    """Outcome of one check as it appears in a report."""

    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    difference: Optional[Dict[str, str]] = None
    error: Optional[str] = None
    elapsed: float = 0.0

    def to_dict(self, timing: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {'name': self.name, 'passed': self.passed}
        if self.details:
            data['details'] = self.details
        if self.difference is not None:
            data['difference'] = self.difference
        if self.error is not None:
            data['error'] = self.error
        if timing:
            data['elapsed'] = round(self.elapsed, 6)
        return data


@dataclass
class RunReport:
    """Inputs and per-check outcomes of one command."""

    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0
    timing: bool = False

    @property
    def passed_count(self) -> int:
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed_count(self) -> int:
        return len(self.checks) - self.passed_count

    @property
    def passed(self) -> bool:
        return self.failed_count == 0

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'command': self.command,
            'inputs': self.inputs,
            'passed': self.passed,
            'summary': {'checks': len(self.checks), 'passed': self.passed_count, 'failed': self.failed_count},
            'checks': [c.to_dict(self.timing) for c in self.checks],
        }
        if self.timing:
            data['elapsed'] = round(self.elapsed, 6)
        return data

    def summary_lines(self) -> List[str]:
        return [
            "-" * 40,
            f"Checks run: {len(self.checks)}",
            f"Checks passed: {self.passed_count}",
            f"Checks failed: {self.failed_count}",
            f"Elapsed seconds: {self.elapsed:.2f}",
        ]

    def log_summary(self, log: Optional[logging.Logger] = None) -> None:
        log = log or logger
        for line in self.summary_lines():
            log.info(line)


def to_check_result(name: str, outcome: Any) -> CheckResult:
    """Normalize whatever a check returned into a CheckResult."""
    if isinstance(outcome, CheckResult):
        return outcome
    if isinstance(outcome, MoveVerification):
        data = outcome.to_dict()
        return CheckResult(name, outcome.passed, data.get('details', {}), data.get('difference'))
    if isinstance(outcome, (ComplexCheck, ComplexCheck4)):
        details = {key: value for key, value in vars(outcome).items() if key != 'shapes'}
        details['shapes'] = {k: list(v) for k, v in outcome.shapes.items()}
        return CheckResult(name, outcome.passed, details)
    if isinstance(outcome, bool):
        return CheckResult(name, outcome)
    raise TypeError(f"Check {name!r} returned unsupported outcome {type(outcome).__name__}")


class CheckRunner:
    """
    Run independent checks in a thread pool.

    Args:
        max_workers (int): Thread pool size
        logger (logging.Logger, optional): Logger for progress and summaries
    """

    def __init__(self, max_workers: int = 4, logger: Optional[logging.Logger] = None):
        self.max_workers = max(1, int(max_workers))
        self.logger = logger or logging.getLogger('pachnercalc.runner')

    def _run_one(self, name: str, fn: Callable[[], Any]) -> CheckResult:
        start = time.perf_counter()
        result = to_check_result(name, fn())
        result.elapsed = time.perf_counter() - start
        self.logger.debug(f"{name}: {'pass' if result.passed else 'FAIL'} ({result.elapsed:.3f}s)")
        return result

    def run(self, command: str, checks: Sequence[Check], inputs: Optional[Dict[str, Any]] = None,
            timing: bool = False) -> RunReport:
        """
        Run all checks and collect them into a report.

        Returns:
            RunReport: Results in the order the checks were given
        """
        start = time.perf_counter()
        self.logger.info(f"Running {len(checks)} checks for '{command}' with {self.max_workers} workers")
        results: List[Optional[CheckResult]] = [None] * len(checks)

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = {executor.submit(self._run_one, name, fn): index
                       for index, (name, fn) in enumerate(checks)}
            for future in as_completed(futures):
                index = futures[future]
                name = checks[index][0]
                try:
                    results[index] = future.result()
                except Exception as e:
                    self.logger.error(f"Error in worker thread: {name}: {e}")
                    results[index] = CheckResult(name, False, error=f"{type(e).__name__}: {e}")

        report = RunReport(command, dict(inputs or {}), [r for r in results if r is not None],
                           time.perf_counter() - start, timing)
        report.log_summary(self.logger)
        return report


# -- alpha systems from the command line ------------------------------------

def parse_alpha(text: str, dimension: int) -> AlphaSystem:
    """
    Parse an alpha option.

    A single rational is a constant system ('0', '-2', '1/3'); otherwise a
    comma-separated list of cell=value pairs such as '1234=1,1235=-1/2'.

    Raises:
        ValueError: If the text is malformed
    """
    cls = alpha_class(dimension)
    text = text.strip()
    if '=' not in text:
        return cls.constant(to_scalar(text))
    values = {}
    for part in text.split(','):
        key, sep, value = part.partition('=')
        if not sep or not key.strip() or not value.strip():
            raise ValueError(f"Malformed alpha entry {part!r}; expected cell=value")
        values[key.strip()] = to_scalar(value)
    return cls(values)


def complete_alpha(move: str, z: ZetaAssignment, alpha: AlphaSystem) -> AlphaSystem:
    """
    Fill right-hand alphas that were not given by transporting the
    left-hand ones across the move. Constant systems are returned as they are.
    """
    if alpha.default is not None:
        return alpha
    cluster = move_cluster(_cluster_move(move))
    missing = [c for c in cluster.rhs.cell_ids() if c not in alpha]
    if not missing:
        return alpha
    absent = [c for c in cluster.lhs.cell_ids() if c not in alpha]
    if absent:
        raise InconsistentAlphaError(f"No alpha given for left-hand cells {', '.join(absent)}")
    return transport_alpha(cluster.lhs, cluster.rhs, z, alpha)


def _cluster_move(move: str) -> str:
    return '2-3' if move == '2-3-deg4' else move


def _dimension(move: str) -> int:
    return 4 if move in ('3-3', '2-4') else 3


def _verifier(move: str) -> Callable[..., MoveVerification]:
    return {
        '2-3': verify_move_23,
        '1-4': verify_move_14,
        '3-3': verify_move_33,
        '2-4': verify_move_24,
    }[move]


# -- check plans ------------------------------------------------------------

def zeta_inputs(move: str, zeta: Optional[ZetaAssignment], samples: int, seed: int,
                **bounds) -> List[ZetaAssignment]:
    """The explicit assignment, or `samples` seeded random ones sized for the move."""
    if zeta is not None:
        needed = MOVE_VERTICES[move]
        if len(zeta) != needed:
            raise ValueError(f"Move {move} needs {needed} zeta values, got {len(zeta)}")
        return [zeta]
    return list(zeta_samples(samples, MOVE_VERTICES[move], seed, **bounds))


def verify_checks(move: str, zetas: Sequence[ZetaAssignment], alpha_text: Optional[str] = None,
                  alpha_random: int = 0, seed: int = 0,
                  negative_controls: bool = False) -> List[Check]:
    """
    Build the checks of a `verify` run.

    Args:
        move: One of VERIFY_MOVES
        zetas: Zeta samples
        alpha_text: Constant, cell=value list, or 'ones' / 'zeta' for the
            published 3-3 systems (None: alpha = 0)
        alpha_random: Number of random consistent systems per zeta (0: none)
        seed: Seed for the random alpha systems
        negative_controls: Add checks that must fail (perturbed alpha, flipped eps)
    """
    if move not in VERIFY_MOVES:
        raise ValueError(f"Unknown move {move!r}; choose from {', '.join(VERIFY_MOVES)}")
    if move == '2-3-deg4' and (alpha_text is not None or alpha_random):
        raise ValueError("The degree-4 identity takes no alpha")

    checks: List[Check] = []
    alpha_rng = random.Random(seed + 1)
    cluster = move_cluster(_cluster_move(move))

    for zi, z in enumerate(zetas):
        label = f"{move} zeta[{zi}]"
        if move == '2-3-deg4':
            checks.append((label, lambda z=z: verify_move_23_deg4(z)))
            if negative_controls:
                checks.append((f"{label} flipped eps", lambda z=z: _expect_failure(verify_move_23_deg4(z, {'2345': 1}))))
            continue

        systems: List[Tuple[str, Callable[[], AlphaSystem]]] = []
        if alpha_random:
            for k in range(alpha_random):
                alpha_seed = alpha_rng.randrange(2 ** 32)
                systems.append((f"alpha random[{k}]",
                                lambda z=z, s=alpha_seed: random_consistent_alpha(cluster.lhs, cluster.rhs, z, s)))
        elif alpha_text in ('ones', 'zeta'):
            if _dimension(move) != 4:
                raise ValueError(f"Alpha system {alpha_text!r} is defined for the 4D moves only")
            systems.append((f"alpha {alpha_text}", lambda z=z, name=alpha_text: published_alpha_systems(z)[name]))
        elif alpha_text is not None:
            # user-supplied systems must balance before any check runs
            alpha = complete_alpha(move, z, parse_alpha(alpha_text, _dimension(move)))
            check_alpha_move(cluster.lhs, cluster.rhs, z, alpha)
            systems.append((f"alpha {alpha_text}", lambda a=alpha: a))
        else:
            systems.append(('alpha 0', lambda: alpha_class(_dimension(move)).zero()))

        for alpha_label, make_alpha in systems:
            name = f"{label} {alpha_label}"
            checks.append((name, lambda z=z, make=make_alpha: _verifier(move)(z, make())))
            if negative_controls:
                checks.append((f"{name} perturbed", lambda z=z, make=make_alpha: _perturbed_control(move, z, make())))
    return checks


def _expect_failure(result: MoveVerification) -> CheckResult:
    """A negative control passes when the identity it feeds does not hold."""
    return CheckResult(f"{result.move} negative control", not result.passed,
                       {k: str(v) for k, v in result.details.items()})


def _perturbed_control(move: str, z: ZetaAssignment, alpha: AlphaSystem) -> CheckResult:
    key = move_cluster(move).lhs.cell_ids()[0]
    return _expect_failure(_verifier(move)(z, alpha.perturbed(key), check_alpha=False))


def published_24_checks() -> List[Check]:
    """The 2-4 identity at the published sample point, with the published weight monomial."""
    z = ZetaAssignment.from_sequence(PUBLISHED_24_ZETA)
    return [
        ('2-4 published zeta', lambda: verify_move_24(z)),
        ('2-4 published zeta, published w', lambda: verify_move_24(z, candidate=published_24_weight())),
    ]


def conjecture_checks(zetas: Iterable[ZetaAssignment]) -> List[Check]:
    """Conjectured 4D invariant on both 4D clusters, compared up to sign."""
    checks: List[Check] = []
    for zi, z in enumerate(zetas):
        for move in ('3-3', '2-4'):
            checks.append((f"conjectured invariant {move} zeta[{zi}]",
                           lambda z=z, m=move: conjectured_invariant_agrees(m, z)))
    return checks


def affinity_checks(move: str, zetas: Sequence[ZetaAssignment], seed: int) -> List[Check]:
    """Both sides of a 4D identity depend affinely on alpha along random lines."""
    cluster = move_cluster(move)
    rng = random.Random(seed + 2)
    checks: List[Check] = []
    for zi, z in enumerate(zetas):
        seeds = (rng.randrange(2 ** 32), rng.randrange(2 ** 32))

        def run(z=z, seeds=seeds) -> CheckResult:
            a0 = random_consistent_alpha(cluster.lhs, cluster.rhs, z, seeds[0])
            a1 = random_consistent_alpha(cluster.lhs, cluster.rhs, z, seeds[1])
            result = alpha_affinity_check(move, z, a0, a1)
            return CheckResult(f"{move} affinity", result.passed,
                               {'lhs_affine': result.lhs_affine, 'rhs_affine': result.rhs_affine})

        checks.append((f"{move} alpha affinity zeta[{zi}]", run))
    return checks


def complex_checks(t: Triangulation, zetas: Sequence[ZetaAssignment], inner_only: bool = False) -> List[Check]:
    """Structural validation plus f o f = 0 at each zeta."""
    checks: List[Check] = []

    def structure() -> CheckResult:
        problems = t.validate()
        return CheckResult('structure', not problems, {'problems': problems} if problems else {})

    checks.append(('structure', structure))
    for zi, z in enumerate(zetas):
        if t.dimension == 3:
            checks.append((f"complex zeta[{zi}]", lambda z=z: check_complex(t, z)))
        else:
            checks.append((f"complex 4d zeta[{zi}]", lambda z=z: check_complex_4d(t, z, inner_only)))
    return checks


def zetas_for(t: Triangulation, zeta: Optional[ZetaAssignment], samples: int, seed: int,
              **bounds) -> List[ZetaAssignment]:
    """Zeta assignments covering the vertices of t (given, or sampled and renumbered)."""
    vertices = t.vertices()
    if zeta is not None:
        missing = [v for v in vertices if v not in zeta]
        if missing:
            raise ValueError(f"No zeta value for vertices {missing}")
        return [zeta]
    result = []
    for sample in zeta_samples(samples, len(vertices), seed, **bounds):
        result.append(ZetaAssignment(dict(zip(vertices, sample.as_tuple()))))
    return result
