"""HTTP service wrapping the core package.

Endpoints
---------
* ``GET  /healthz``  -- liveness probe.
* ``POST /assemble`` -- assemble (or fetch from cache) a sigop-matrix/1
  document for a configuration.
* ``POST /spectrum`` -- eigenvalues of an assembled document, as CSV.
* ``POST /verify``   -- run the check suite; returns reports, JSON lines
  and a CSV summary.
* ``POST /report``   -- reformat a JSON-lines report into CSV and a
  human-readable table.

Errors carry a structured detail ``{"kind": "config"|"numerical"|"io",
"message": ...}``; the CLI maps kinds onto exit codes 1/2/3.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import cache, sigop, verify
from .config import RunConfig
from .errors import ConfigError, DiracsigError
from .models import QuadratureSpec, make_model
from .solutions import drum_basis, slab_basis

app = FastAPI(title="diracsig", version="0.1.0")


class QuadratureParams(BaseModel):
    surface_order: int = 128
    volume_order: int = 160


class ConfigPayload(BaseModel):
    """Mirror of the run configuration accepted by every endpoint."""

    model: str = "drum"
    mass: float = 0.0
    slab_lifetime: float = 2.0
    n_max: int = 8
    quad: QuadratureParams = Field(default_factory=QuadratureParams)
    symmetries: list[str] = Field(default_factory=list)
    weight: str = "indicator_negative"
    delta_tau: float = 1e-3
    translation: float = 0.7
    seed: int = 1234
    tolerances: dict[str, float] = Field(default_factory=dict)
    global_tolerance: float | None = None
    cache_dir: str | None = None

    def to_run_config(self) -> RunConfig:
        return RunConfig.from_dict(self.model_dump())


class AssembleRequest(BaseModel):
    config: ConfigPayload
    use_cache: bool = True


class AssembleResponse(BaseModel):
    cache_hit: bool
    content_hash: str
    canonical: str  # exact file body, byte-stable across runs
    document: dict


class SpectrumRequest(BaseModel):
    document: dict


class SpectrumResponse(BaseModel):
    eigenvalues: list[float]
    csv: str


class VerifyRequest(BaseModel):
    config: ConfigPayload
    inject_fault: bool = False


class VerifyResponse(BaseModel):
    all_pass: bool
    reports: list[dict]
    jsonl: str
    csv: str


class ReportRequest(BaseModel):
    jsonl: str


class ReportResponse(BaseModel):
    all_pass: bool
    csv: str
    table: str


def _http_error(exc: DiracsigError) -> HTTPException:
    kind = {1: "config", 2: "numerical", 3: "io"}[exc.exit_code]
    status = {1: 400, 2: 422, 3: 500}[exc.exit_code]
    return HTTPException(status_code=status, detail={"kind": kind, "message": str(exc)})


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


def assemble_document(cfg: RunConfig, use_cache: bool = True) -> tuple[bool, str, str]:
    """Core assembly with content-addressed caching.

    Returns ``(cache_hit, content_hash, canonical_text)``.
    """
    spec = QuadratureSpec(surface_order=cfg.surface_order, volume_order=cfg.volume_order)
    model = make_model(cfg.model, cfg.mass, cfg.slab_lifetime)
    key = sigop.assembly_key(model, cfg.n_max, spec)
    if use_cache:
        hit = cache.lookup(key, cfg.cache_dir)
        if hit is not None:
            return True, key, hit
    basis = (
        drum_basis(cfg.n_max, spec)
        if cfg.model == "drum"
        else slab_basis(cfg.n_max, model, spec)
    )
    pairing = sigop.assemble_pairing(basis, spec)
    sigop.require_well_conditioned(basis.gram)
    doc = sigop.build_document(basis, spec, pairing)
    text = sigop.render_document(doc)
    if use_cache:
        cache.store(key, text, cfg.cache_dir)
    return False, key, text


@app.post("/assemble", response_model=AssembleResponse)
def assemble(req: AssembleRequest) -> AssembleResponse:
    import json

    try:
        cfg = req.config.to_run_config()
        hit, key, text = assemble_document(cfg, use_cache=req.use_cache)
    except DiracsigError as exc:
        raise _http_error(exc) from exc
    return AssembleResponse(
        cache_hit=hit, content_hash=key, canonical=text, document=json.loads(text)
    )


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum(req: SpectrumRequest) -> SpectrumResponse:
    try:
        eigenvalues, meta = sigop.spectrum_of_document(req.document)
    except DiracsigError as exc:
        raise _http_error(exc) from exc
    lines = [
        "# schema: sigop-spectrum/1",
        f"# model: {meta['model']}",
        f"# mass: {format(float(meta['mass']), '.17g')}",
        f"# truncation: {meta['truncation']}",
        f"# content_hash: {meta['content_hash']}",
        f"# basis: {' '.join(meta['basis_labels'])}",
        "index,eigenvalue",
    ]
    for i, lam in enumerate(eigenvalues):
        lines.append(f"{i},{format(float(lam), '.17g')}")
    return SpectrumResponse(eigenvalues=[float(v) for v in eigenvalues], csv="\n".join(lines) + "\n")


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    config, reports = verify.run_suite_from_dict(
        req.config.model_dump(), inject_fault=req.inject_fault
    )
    ok = verify.all_pass(reports)
    return VerifyResponse(
        all_pass=ok,
        reports=[r.record() for r in reports],
        jsonl=verify.serialize_reports(reports, config),
        csv=verify.reports_csv(reports),
    )


@app.post("/report", response_model=ReportResponse)
def report(req: ReportRequest) -> ReportResponse:
    try:
        records = verify.parse_report_lines(req.jsonl)
    except ConfigError as exc:
        raise _http_error(exc) from exc
    checks = [r for r in records if r.get("name") != "suite-header"]
    ok = all(bool(r["pass"]) for r in checks)
    rows = ["name,anchor,value,tol,pass"]
    width = max([len(str(r["name"])) for r in checks], default=4)
    tbl = [f"{'check'.ljust(width)}  {'value':>12}  {'tol':>10}  verdict"]
    for r in checks:
        tol = r.get("tol")
        tol_s = "" if tol is None else format(float(tol), ".3g")
        rows.append(
            f"{r['name']},{r.get('anchor', '')},{format(float(r['value']), '.17g')},"
            f"{'' if tol is None else format(float(tol), '.17g')},{str(bool(r['pass'])).lower()}"
        )
        verdict = "pass" if r["pass"] else "FAIL"
        tbl.append(
            f"{str(r['name']).ljust(width)}  {float(r['value']):>12.3e}  {tol_s:>10}  {verdict}"
        )
    return ReportResponse(all_pass=ok, csv="\n".join(rows) + "\n", table="\n".join(tbl) + "\n")
