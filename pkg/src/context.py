"""
ExperimentConfig class to hold command-line params
"""
from pathlib import Path
from dataclasses import dataclass, field

import constants
from errors import DomainError
from model.qparam import QParam, Regime

@dataclass
class ExperimentConfig:
    """
    ExperimentConfig holds the command-line parameters of one experiment run
    """
    name: str
    q_grid: list[float]
    n: int = constants.DEFAULT_N
    replicates: int = constants.DEFAULT_REPLICATES
    seed: int = constants.DEFAULT_SEED
    workers: int = 1
    output_path: Path | None = None
    tol: float = constants.DEFAULT_TOL
    ell: int = constants.DEFAULT_ELL
    W: int = constants.DEFAULT_WINDOW
    kmax: int = constants.DEFAULT_KMAX
    regen_steps: int = constants.DEFAULT_REGEN_STEPS
    logging_config: str = "logging-config.json"
    plot: bool = False
    extras: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise DomainError(f"{self.name}: replicates must be at least 1, got {self.replicates}")
        if self.n < 1:
            raise DomainError(f"{self.name}: n must be at least 1, got {self.n}")
        if self.workers < 1:
            raise DomainError(f"{self.name}: workers must be at least 1, got {self.workers}")
        if not self.q_grid:
            raise DomainError(f"{self.name}: empty q grid")
        self.q_grid = [QParam.of(q).q for q in self.q_grid]
        if self.output_path is not None:
            self.output_path = Path(self.output_path)

    def validate_regime(self, regime: Regime) -> "ExperimentConfig":
        """
        Raise DomainError when some q of the grid lies outside `regime`
        """
        outside = [q for q in self.q_grid if QParam(q).regime is not regime]
        if outside:
            bounds = {Regime.SUB_CRITICAL: "(0, 1)", Regime.CRITICAL: "{1}",
                      Regime.SUPER_CRITICAL: "(1, inf)"}[regime]
            raise DomainError(f"{self.name} needs q in {bounds}, got {outside}")
        return self

    def provenance(self, q: float) -> dict[str, float | int]:
        """Columns every CSV row carries"""
        return {"q": q, "n": self.n, "replicates": self.replicates, "seed": self.seed}
