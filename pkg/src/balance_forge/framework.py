"""Local threshold step followed by the global slot-matching step."""
from __future__ import annotations

from dataclasses import dataclass

from .lp import FractionalSolution
from .model import ContractViolation, Instance, Orientation
from .rounding import st_round
from .thresholds import ThresholdFunction

LOCAL_TOL = 1e-9


@dataclass(frozen=True)
class LocalStepResult:
    pre_oriented: Orientation
    residual: Instance
    residual_x: FractionalSolution


def local_step(instance: Instance, x: FractionalSolution, f: ThresholdFunction) -> LocalStepResult:
    """Orient e to u whenever x[e,u] exceeds f(p(e,u)) by more than the tolerance."""
    fixed: dict[int, str] = {}
    for e in sorted(instance.edges, key=lambda e: e.id):
        for ep in e.endpoints:
            if x.value(e.id, ep.v) > f(float(ep.p)) + LOCAL_TOL:
                if e.id in fixed:
                    raise ContractViolation(f"edge {e.id} qualifies at two endpoints; threshold range broken")
                fixed[e.id] = ep.v
    rest = [e for e in instance.edges if e.id not in fixed]
    residual = instance.with_edges(rest)
    rx = FractionalSolution(
        {key: val for key, val in x.x.items() if key[0] not in fixed},
        sum(float(residual.edge(eid).cost(v)) * val for (eid, v), val in x.x.items() if eid not in fixed),
    )
    return LocalStepResult(Orientation(fixed), residual, rx)


def framework_round(instance: Instance, x: FractionalSolution, f: ThresholdFunction) -> Orientation:
    step = local_step(instance, x, f)
    rest = st_round(step.residual, step.residual_x)
    return step.pre_oriented.merged(rest)
