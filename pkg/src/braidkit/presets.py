"""Built-in (R', R, lambda) data and the shipped reference tables."""
from __future__ import annotations

from importlib import resources
from typing import Callable, Dict, List

from . import rtensor
from .ncalg import NCAlgebra, NCPoly
from .qcoeff import ONE
from .rtensor import PairData, RMatrixError


def su2_euclidean() -> PairData:
    pair = rtensor.build_euclidean_gauge(rtensor.standard_su2())
    pair.reality = "I"
    pair.metric = rtensor.find_metric(pair)
    return pair


def su2_minkowski() -> PairData:
    # The metric exists, but R fails the type I reality condition.
    pair = rtensor.build_minkowski_gauge(rtensor.standard_su2())
    pair.metric = rtensor.find_metric(pair)
    return pair


def identity(n: int = 4) -> PairData:
    """Commuting coordinates with the flip as braiding: the undeformed case."""
    one = rtensor.identity_rmatrix(n)
    return PairData(one, one, ONE, name="identity")


def permutation(n: int = 4) -> PairData:
    """Free coordinates with trivial braiding."""
    p = rtensor.permutation(n)
    return PairData(p, p, ONE, name="permutation")


PRESETS: Dict[str, Callable[[], PairData]] = {
    "su2-euclidean": su2_euclidean,
    "su2-minkowski": su2_minkowski,
    "identity": identity,
    "permutation": permutation,
}


def load_preset(name: str) -> PairData:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise RMatrixError(f"unknown preset {name!r} (choose from {', '.join(PRESETS)})") from None
    return factory()


def _table_text(name: str) -> str:
    return resources.files("braidkit").joinpath("data", name).read_text(encoding="utf-8")


def parse_table(text: str, alg: NCAlgebra) -> List[List[NCPoly]]:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([alg.parse(cell.strip()) for cell in line.split("|")])
    return rows


def reference_table(alg: NCAlgebra) -> List[List[NCPoly]]:
    """Deformed c-on-x table for the su2 Euclidean preset."""
    return parse_table(_table_text("conformal_table.txt"), alg)


def classical_table(alg: NCAlgebra) -> List[List[NCPoly]]:
    return parse_table(_table_text("classical_table.txt"), alg)
