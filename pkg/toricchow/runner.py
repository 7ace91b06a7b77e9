"""Command dispatch: build the complex named by the options and assemble a Report."""

from __future__ import annotations

import logging
from collections.abc import Callable
from pathlib import Path

from pydantic import BaseModel, Field

from toricchow import chow
from toricchow.complex import (
    DEFAULT_AUDIT_FACTOR,
    DEFAULT_AUDIT_SEED,
    PolyhedralComplex,
    component_intersections,
    star_complex,
    star_fan,
)
from toricchow.divisors import (
    MonomialFunction,
    TWeilDivisor,
    divisor_of,
    function_of,
    principal_divisor,
)
from toricchow.documents import ComplexDocument, load_function, parse_complex, serialize_complex
from toricchow.errors import NonRegularError, ToricChowError
from toricchow.exactalg import QMat, format_rat, in_row_space
from toricchow.fixtures import fixture, split_name
from toricchow.polyhedron import Cone

logger = logging.getLogger(__name__)

COMMANDS = (
    "check",
    "chow",
    "generic-fiber",
    "special-fiber",
    "rank-poly",
    "verify",
    "divisor",
    "pa-divisor",
    "specialize",
    "orbits",
    "fixture",
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NON_REGULAR = 2

P2_MODEL_NOTE = (
    "p2-model: the rank-one CH_1 stated alongside this model conflicts with its own "
    "10 relations on 9 generators, which leave a 2-dimensional quotient; "
    "the dimensions reported here follow the relations"
)
NON_REGULAR_NOTE = (
    "the complex is not regular; the presentations below were computed with --force "
    "and the exactness results they rely on assume regularity"
)


class RunOptions(BaseModel):
    """Everything a command needs besides its name."""

    input: Path | None = None
    fixture: str | None = None
    k: int | None = None
    all: bool = False
    force: bool = False
    seed: int = DEFAULT_AUDIT_SEED
    audit_factor: int = DEFAULT_AUDIT_FACTOR
    m: list[int] = Field(default_factory=list)
    l: int = 0  # noqa: E741
    function: Path | None = None


class ComplexSummary(BaseModel):
    ambient_rank: int
    skeleton_sizes: list[int]
    cone_counts: list[int] | None = None
    complete: bool
    regular: bool
    reduced: bool
    audit_seed: int
    audit_samples: int


class ChowResult(BaseModel):
    k: int
    generators: list[str]
    relations: list[list[str]]
    rank: int
    dim: int
    free_generators: list[str]
    expressions: dict[str, str]


class FiberResult(BaseModel):
    k: int
    generic: int
    total: int
    special: int
    holds: bool


class RankPolynomialResult(BaseModel):
    polynomial: str
    coefficients: list[int]
    chow_dims: list[int] | None = None
    ok: bool | None = None


class CheckResult(BaseModel):
    name: str
    ok: bool
    detail: str


class Coefficient(BaseModel):
    label: str
    value: str


class DivisorResult(BaseModel):
    function: str
    horizontal: list[Coefficient]
    vertical: list[Coefficient]
    vector: list[str]
    principal: bool | None = None
    in_relations: bool | None = None


class SpecializationResult(BaseModel):
    k: int
    rows: list[str]
    columns: list[str]
    matrix: list[list[int]]


class OrbitEntry(BaseModel):
    label: str
    quotient_rank: int
    projection: list[list[int]]
    star_sizes: list[int]


class IntersectionEntry(BaseModel):
    first: str
    second: str
    dimension: int


class OrbitsResult(BaseModel):
    cones: list[OrbitEntry]
    cells: list[OrbitEntry]
    intersections: list[IntersectionEntry]


class Report(BaseModel):
    """Machine-readable result of one command; the text report renders the same data."""

    command: str
    source: str
    summary: ComplexSummary | None = None
    chow: list[ChowResult] = Field(default_factory=list)
    fibers: list[FiberResult] = Field(default_factory=list)
    ch0_special: int | None = None
    rank_polynomial: RankPolynomialResult | None = None
    checks: list[CheckResult] = Field(default_factory=list)
    divisor: DivisorResult | None = None
    specialization: list[SpecializationResult] = Field(default_factory=list)
    orbits: OrbitsResult | None = None
    document: ComplexDocument | None = None
    notes: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    error: str | None = None


def load_complex(options: RunOptions) -> tuple[PolyhedralComplex, str]:
    """The complex named by ``--input`` or ``--fixture`` and a description of its source."""
    if (options.input is None) == (options.fixture is None):
        raise ToricChowError("give exactly one of --input or --fixture")
    if options.input is not None:
        c = parse_complex(options.input, seed=options.seed, audit_factor=options.audit_factor)
        return c, str(options.input)
    assert options.fixture is not None
    c = fixture(options.fixture, seed=options.seed, audit_factor=options.audit_factor)
    return c, f"fixture {options.fixture}"


def _ks(c: PolyhedralComplex, options: RunOptions) -> list[int]:
    top = c.ambient_rank + 1
    if options.k is None or options.all:
        return list(range(top + 1))
    if not 0 <= options.k <= top:
        logger.debug("k=%d lies outside 0..%d; its cycle basis is empty", options.k, top)
    return [options.k]


def _matrix_text(m: QMat) -> list[list[str]]:
    return [[format_rat(x) for x in row] for row in m.rows()]


def summarize(c: PolyhedralComplex) -> ComplexSummary:
    return ComplexSummary(
        ambient_rank=c.ambient_rank,
        skeleton_sizes=c.skeleton_sizes(),
        cone_counts=c.cone_counts() if c.complete else None,
        complete=c.complete,
        regular=c.regular,
        reduced=c.is_reduced,
        audit_seed=c.audit_seed,
        audit_samples=c.audit_factor * len(c.cells),
    )


def _chow(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    for k in _ks(c, options):
        p = chow.presentation(c, k, force=options.force)
        labels = p.basis.labels
        report.chow.append(
            ChowResult(
                k=k,
                generators=list(labels),
                relations=_matrix_text(p.relations),
                rank=p.rank,
                dim=p.dim,
                free_generators=[labels[j] for j in p.free_generators],
                expressions={labels[j]: p.expression_text(j) for j in sorted(p.expressions)},
            )
        )
    return EXIT_OK


def _fibers(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    for k in _ks(c, options):
        bounds = chow.localization_bounds(c, k, force=options.force)
        report.fibers.append(
            FiberResult(
                k=k,
                generic=bounds.generic,
                total=bounds.total,
                special=bounds.special,
                holds=bounds.holds,
            )
        )
    return EXIT_OK


def _special_fiber(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    _fibers(c, report, options)
    report.ch0_special = chow.ch0_special_incidence(c)
    return EXIT_OK


def _rank_poly(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    polynomial = chow.rank_polynomial(c, force=options.force)
    report.rank_polynomial = RankPolynomialResult(
        polynomial=str(polynomial), coefficients=list(polynomial.coefficients)
    )
    return EXIT_OK


def _verify(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    n = c.ambient_rank
    check = chow.verify_rank_formula(c, force=options.force)
    report.rank_polynomial = RankPolynomialResult(
        polynomial=str(check.polynomial),
        coefficients=list(check.polynomial.coefficients),
        chow_dims=list(check.chow_dims),
        ok=check.ok,
    )
    dims = chow.total_dims(c, force=options.force)
    vertices = len(c.skeleton(0))
    top_special = chow.special_fiber_dim(c, n, force=options.force)
    incidence = chow.ch0_special_incidence(c)
    report.checks = [
        CheckResult(name="CH_0 vanishes", ok=dims[0] == 0, detail=f"dim {dims[0]}"),
        CheckResult(
            name=f"CH_{n + 1} is one-dimensional", ok=dims[n + 1] == 1, detail=f"dim {dims[n + 1]}"
        ),
        CheckResult(
            name="special fiber CH_0 is one-dimensional",
            ok=incidence == 1,
            detail=f"dim {incidence}",
        ),
        CheckResult(
            name=f"special fiber CH_{n} counts the vertices",
            ok=top_special == vertices,
            detail=f"dim {top_special}, {vertices} vertices",
        ),
    ]
    _fibers(c, report, RunOptions(all=True, force=options.force))
    failed = [f.k for f in report.fibers if not f.holds]
    report.checks.append(
        CheckResult(
            name="localization bounds",
            ok=not failed,
            detail="generic <= total <= generic + special"
            + (f" fails at k={failed}" if failed else ""),
        )
    )
    ok = check.ok and all(item.ok for item in report.checks)
    return EXIT_OK if ok else EXIT_INVALID


def _divisor_result(
    c: PolyhedralComplex, divisor: TWeilDivisor, description: str, options: RunOptions
) -> DivisorResult:
    result = DivisorResult(
        function=description,
        horizontal=[
            Coefficient(label=Cone(c.ambient_rank, (r,)).label(), value=format_rat(x))
            for r, x in divisor.horizontal
        ],
        vertical=[
            Coefficient(label="(" + ",".join(format_rat(y) for y in v) + ")", value=format_rat(x))
            for v, x in divisor.vertical
        ],
        vector=[format_rat(x) for x in divisor.vector()],
    )
    if c.complete:
        result.principal = function_of(c, divisor).is_affine()
        if c.regular or options.force:
            relations = chow.relation_matrix(c, c.ambient_rank, force=options.force)
            result.in_relations = in_row_space(relations, divisor.vector())
    return result


def _divisor(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    m = tuple(options.m) if options.m else tuple(0 for _ in range(c.ambient_rank))
    divisor = principal_divisor(c, MonomialFunction(m, options.l))
    description = f"monomial m=({','.join(str(x) for x in m)}) l={options.l}"
    report.divisor = _divisor_result(c, divisor, description, options)
    return EXIT_OK


def _pa_divisor(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    if options.function is None:
        raise ToricChowError("pa-divisor needs a --function document")
    phi = load_function(options.function, c)
    report.divisor = _divisor_result(
        c, divisor_of(phi), f"piecewise affine from {options.function}", options
    )
    return EXIT_OK


def _specialize(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    for k in _ks(c, options):
        sp = chow.specialize(c, k, force=options.force)
        report.specialization.append(
            SpecializationResult(
                k=k,
                rows=list(sp.rows),
                columns=list(sp.columns),
                matrix=[list(row) for row in sp.matrix.rows()],
            )
        )
    return EXIT_OK


def _star_sizes(build: Callable[[], PolyhedralComplex], quotient_rank: int) -> list[int]:
    if quotient_rank == 0:
        return [1]
    return build().skeleton_sizes()


def _orbits(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    lattices = c.orbit_lattices
    n = c.ambient_rank
    cones = sorted({cell.rays for cell in c.cells}, key=lambda rays: (len(rays), rays))
    cone_entries = []
    for rays in cones:
        cone = Cone(n, rays)
        lattice = lattices.for_cone(rays)
        cone_entries.append(
            OrbitEntry(
                label=chow.horizontal_label(cone),
                quotient_rank=lattice.quotient_rank,
                projection=[list(row) for row in lattice.projection.rows()],
                star_sizes=_star_sizes(lambda cone=cone: star_complex(c, cone),
                                       lattice.quotient_rank),
            )
        )
    cell_entries = []
    for i, cell in enumerate(c.cells):
        lattice = lattices.for_cell(i)
        cell_entries.append(
            OrbitEntry(
                label=chow.cell_label(c, i),
                quotient_rank=lattice.quotient_rank,
                projection=[list(row) for row in lattice.projection.rows()],
                star_sizes=_star_sizes(lambda cell=cell: star_fan(c, cell),
                                       lattice.quotient_rank),
            )
        )
    vertices = c.skeleton_indices(0)
    report.orbits = OrbitsResult(
        cones=cone_entries,
        cells=cell_entries,
        intersections=[
            IntersectionEntry(
                first=chow.cell_label(c, vertices[i]),
                second=chow.cell_label(c, vertices[j]),
                dimension=d,
            )
            for (i, j), d in sorted(component_intersections(c).items())
        ],
    )
    return EXIT_OK


def _check(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    return EXIT_OK


def _fixture(c: PolyhedralComplex, report: Report, options: RunOptions) -> int:
    report.document = serialize_complex(c)
    return EXIT_OK


HANDLERS: dict[str, Callable[[PolyhedralComplex, Report, RunOptions], int]] = {
    "check": _check,
    "chow": _chow,
    "generic-fiber": _fibers,
    "special-fiber": _special_fiber,
    "rank-poly": _rank_poly,
    "verify": _verify,
    "divisor": _divisor,
    "pa-divisor": _pa_divisor,
    "specialize": _specialize,
    "orbits": _orbits,
    "fixture": _fixture,
}


def _notes(c: PolyhedralComplex, report: Report, options: RunOptions) -> None:
    if options.fixture is not None and split_name(options.fixture)[0] == "p2-model":
        report.warnings.append(P2_MODEL_NOTE)
    if options.force and not c.regular:
        report.warnings.append(NON_REGULAR_NOTE)
    if c.complete:
        report.notes.append(
            f"completeness certified by combinatorial checks and {c.audit_factor * len(c.cells)} "
            f"sample points (seed {c.audit_seed}); the sampling audit is not a proof"
        )
    else:
        report.notes.append("the complex is not complete")


def run(command: str, options: RunOptions) -> tuple[Report, int]:
    """Run one command; failures are recorded in ``Report.error`` with a nonzero exit code."""
    source = options.fixture or (str(options.input) if options.input else "")
    report = Report(command=command, source=source)
    if command not in HANDLERS:
        report.error = f"unknown command '{command}' (known: {', '.join(COMMANDS)})"
        return report, EXIT_INVALID
    try:
        c, report.source = load_complex(options)
        report.summary = summarize(c)
        _notes(c, report, options)
        logger.debug("running %s on %s", command, report.source)
        code = HANDLERS[command](c, report, options)
    except NonRegularError as exc:
        report.error = str(exc)
        return report, EXIT_NON_REGULAR
    except ToricChowError as exc:
        report.error = str(exc)
        return report, EXIT_INVALID
    return report, code


