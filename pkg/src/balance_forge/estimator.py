"""Estimator-style wrapper: configure once, fit on an instance, read the orientation."""
from __future__ import annotations

import inspect

from .drivers import SolveReport, VariantConfig, binary_search_makespan, load_instance_or_raise, solve_bicriteria
from .model import Instance, Orientation


class NotFittedError(RuntimeError):
    pass


def check_instance(X) -> Instance:
    """Accept an Instance, a JSON-shaped dict or a path; return an Instance."""
    return load_instance_or_raise(X)


def check_is_fitted(est, attr: str = "report_") -> None:
    if getattr(est, attr, None) is None:
        raise NotFittedError(f"{type(est).__name__} is not fitted; call fit first")


class GraphBalancer:
    """Bicriteria orientation solver with get_params / set_params / fit / predict.

    With target=None the smallest target at which the relaxation is feasible
    is searched for, otherwise the given target is used as is.
    """

    def __init__(self, variant: str = "gb", gamma: float | None = 0.25, beta: float | None = None,
                 c: float | None = None, k: int | None = None, target: float | None = None,
                 rel_tol: float = 1e-6, certify: bool = True):
        self.variant = variant
        self.gamma = gamma
        self.beta = beta
        self.c = c
        self.k = k
        self.target = target
        self.rel_tol = rel_tol
        self.certify = certify

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "GraphBalancer":
        valid = set(self._param_names())
        for key, val in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {type(self).__name__}")
            setattr(self, key, val)
        return self

    def config(self) -> VariantConfig:
        gamma = self.gamma if self.variant != "srgb" else None
        return VariantConfig(self.variant, gamma=gamma, beta=self.beta, c=self.c, k=self.k)

    def fit(self, X, y=None) -> "GraphBalancer":
        inst = check_instance(X)
        cfg = self.config()
        if self.target is None:
            T, rep = binary_search_makespan(inst, cfg, self.rel_tol, certify=self.certify)
        else:
            T = self.target
            rep = solve_bicriteria(inst, T, cfg, certify=self.certify)
        self.instance_ = inst
        self.target_ = T
        self.report_: SolveReport | None = rep
        self.orientation_: Orientation | None = rep.orientation
        return self

    def predict(self, X=None) -> Orientation | None:
        """Orientation for X, refitting when X is not the fitted instance."""
        check_is_fitted(self)
        if X is not None and check_instance(X) != self.instance_:
            return type(self)(**self.get_params()).fit(X).orientation_
        return self.orientation_

    def fit_predict(self, X, y=None) -> Orientation | None:
        return self.fit(X).orientation_

    def score(self, X=None, y=None) -> float:
        """Negative makespan, so larger is better."""
        check_is_fitted(self)
        rep = self.report_ if X is None else type(self)(**self.get_params()).fit(X).report_
        return float("-inf") if rep.makespan is None else -float(rep.makespan)

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"
