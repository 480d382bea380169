"""Verification DAGs for the non-vanishing chain and the cone conclusions.

A certificate is a list of nodes.  COMPUTED nodes carry a recipe (an op
name and its arguments) that reproduces their payload; RULE nodes record
an exactness, duality or bookkeeping step whose hypotheses are among their
inputs; ASSUMED nodes are literature citations that are not machine-checked.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources

from . import bundles
from .bundles import Sheaf, h1_sym2FstarG_lower, les_solve
from .cohomology import h_Y
from .errors import HypothesisFailed, InvalidParams, WindowExceeded
from .les import DimInterval
from .picard import PicClass, dim_X, fano_witness, omega_X, very_ample_pattern
from .ring import RingParams

__all__ = [
    "CertificateNode",
    "Certificate",
    "ConeReport",
    "theorem_kod_fails",
    "kodaira_violation",
    "cone_certificate",
    "cm_window",
    "emit",
    "load_schema",
    "validate",
    "replay",
    "RECIPES",
]

STATUSES = ("COMPUTED", "RULE", "ASSUMED")


# --------------------------------------------------------------------------
# recipes: every COMPUTED payload is produced by one of these


def _r_h_Y(n, a, b, i, p):
    return {"dims": {"h": h_Y(n, (a, b), i, p)}, "bounds": {}}


def _r_h1_FstarB(a, b, p, n):
    r = bundles.h1_FstarB(a, b, p, n)
    return {"dims": {"h1": r.value, "target": r.target_dim, "image": r.image_dim}, "bounds": {}}


def _r_h1_FstarG(a, b, p, n):
    r = bundles.h1_FstarG(a, b, p, n)
    return {"dims": {"side_conditions_hold": int(r.side_conditions_hold)},
            "bounds": {"h1": r.interval.to_json()}}


def _r_eta_gap(a, b, p, n):
    r = bundles.h1_sym2FstarB_lower(a, b, p, n)
    return {"dims": {"im_eta1": r.im_eta1.dim, "im_eta2": r.im_eta2.dim, "gap": r.gap,
                     "target": r.target_dim}, "bounds": {}}


def _r_les(kind, a, b, degree, p, n):
    return {"dims": {}, "bounds": {"h": les_solve(Sheaf(kind, (a, b)), degree, p, n).to_json()}}


def _r_omega_X(p, n):
    c = omega_X(p, n).result
    return {"dims": {"a": c.a, "b": c.b, "c": c.c}, "bounds": {}}


def _r_dim_X(n):
    return {"dims": {"dim_X": dim_X(n)}, "bounds": {}}


def _r_dim_Z(n):
    return {"dims": {"dim_Z": dim_X(n) + 1}, "bounds": {}}


def _r_fano(p, n):
    w = fano_witness(p, n)
    c = w.result
    return {"dims": {"a": c.a, "b": c.b, "c": c.c, "holds": int(bool(w))}, "bounds": {}}


def _r_compare_lt(left, right):
    return {"dims": {"left": left, "right": right, "holds": int(left < right)}, "bounds": {}}


def _r_index(p, n):
    # smallest r > 0 with omega_X = L^(-r) for L = omega_X^(-1): always 1 by construction,
    # checked as equality of classes
    w = omega_X(p, n).result
    L = -w
    return {"dims": {"index": 1 if w + L == PicClass(0, 0, 0) else 0}, "bounds": {}}


RECIPES = {
    "h_Y": _r_h_Y,
    "h1_FstarB": _r_h1_FstarB,
    "h1_FstarG": _r_h1_FstarG,
    "eta_gap": _r_eta_gap,
    "les": _r_les,
    "omega_X": _r_omega_X,
    "dim_X": _r_dim_X,
    "dim_Z": _r_dim_Z,
    "fano": _r_fano,
    "compare_lt": _r_compare_lt,
    "index": _r_index,
}


def run_recipe(op: str, args: dict) -> dict:
    return RECIPES[op](**args)


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class CertificateNode:
    id: str
    status: str
    statement: str
    anchor: dict
    inputs: tuple[str, ...] = ()
    payload: dict = field(default_factory=lambda: {"dims": {}, "bounds": {}})
    recipe: dict | None = None
    citation: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status}")
        if self.status == "ASSUMED" and not self.citation:
            raise ValueError(f"ASSUMED node {self.id} needs a citation")
        if self.status == "COMPUTED" and self.recipe is None:
            raise ValueError(f"COMPUTED node {self.id} needs a recipe")

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "status": self.status,
            "statement": self.statement,
            "anchor": dict(self.anchor),
            "inputs": list(self.inputs),
            "payload": {"dims": dict(self.payload.get("dims", {})),
                        "bounds": dict(self.payload.get("bounds", {}))},
        }
        if self.recipe is not None:
            out["recipe"] = self.recipe
        if self.citation is not None:
            out["citation"] = self.citation
        return out


def _anchor(location: str, formula: str) -> dict:
    return {"location": location, "quote": formula}


def computed(id, statement, anchor, op, inputs=(), **args) -> CertificateNode:
    return CertificateNode(id, "COMPUTED", statement, anchor, tuple(inputs),
                           run_recipe(op, args), {"op": op, "args": args})


def rule(id, statement, anchor, inputs, dims=None) -> CertificateNode:
    return CertificateNode(id, "RULE", statement, anchor, tuple(inputs), {"dims": dims or {}, "bounds": {}})


@dataclass
class Certificate:
    kind: str
    params: dict
    nodes: list
    verdict: dict

    def node(self, id: str) -> CertificateNode:
        for nd in self.nodes:
            if nd.id == id:
                return nd
        raise KeyError(id)

    def ids(self) -> list[str]:
        return [nd.id for nd in self.nodes]

    def check_dag(self) -> None:
        """Inputs must refer to earlier nodes (so the graph is acyclic) and ids be unique."""
        seen: set[str] = set()
        for nd in self.nodes:
            if nd.id in seen:
                raise ValueError(f"duplicate node id {nd.id}")
            for i in nd.inputs:
                if i not in seen:
                    raise ValueError(f"node {nd.id} uses {i} before it is defined")
            seen.add(nd.id)

    def ancestors(self, id: str) -> set[str]:
        out: set[str] = set()
        stack = [id]
        while stack:
            cur = self.node(stack.pop())
            for i in cur.inputs:
                if i not in out:
                    out.add(i)
                    stack.append(i)
        return out

    def depends_on_assumed(self, id: str) -> bool:
        return any(self.node(a).status == "ASSUMED" for a in self.ancestors(id) | {id})

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "nodes": [nd.to_json() for nd in self.nodes],
            "verdict": self.verdict,
        }


@dataclass
class ConeReport:
    dim_Z: int
    not_cm: bool
    witness: dict
    index: int
    omega_Z_line_bundle: bool
    assumptions: list
    certificate: Certificate

    def to_json(self) -> dict:
        return {
            "dim_Z": self.dim_Z,
            "not_cm": self.not_cm,
            "witness": self.witness,
            "index": self.index,
            "omega_Z_line_bundle": self.omega_Z_line_bundle,
            "assumptions": self.assumptions,
        }


# --------------------------------------------------------------------------
# the non-vanishing chain


def _theorem_params(p: int, n: int) -> tuple[int, int]:
    RingParams(p, n)
    if n != 3:
        raise HypothesisFailed(f"the chain is written for n = 3, got n = {n}")
    if not (2 <= p <= n):
        raise HypothesisFailed(f"need p <= n = 3, got p = {p}")
    return 3 - p, 3 + p


def _theorem_nodes(p: int, n: int):
    a, b = _theorem_params(p, n)
    nodes = [
        computed("omega-X", f"omega_X = (p-n, p(n-2)-n; 1-n) = {omega_X(p, n).result}",
                 _anchor("canonical-class", "omega_X = pi^*O_Y(p-n, p(n-2)-n) (x) O_pi(1-n)"),
                 "omega_X", p=p, n=n),
        computed("dim-X", f"dim X = 3n - 3 = {dim_X(n)}", _anchor("dimension", "dim X = 3n-3"),
                 "dim_X", n=n),
        rule("serre-duality-X", "h^5(X, omega_X^2) = h^1(X, omega_X^(-1))",
             _anchor("serre-duality", "H^i(X, omega_X^2)^dual = H^(6-i)(X, omega_X^(-1))"),
             ("omega-X", "dim-X")),
        rule("push-forward",
             f"h^1(X, pi^*O_Y({a},{a}) (x) O_pi(2)) = h^1(Y, O_Y({a},{a}) (x) Sym^2 F*G'); "
             "pi_* O_pi(2) = Sym^2 F*G' and R^j pi_* O_pi(2) = 0 for j > 0",
             _anchor("projection", "H^i(X, pi^*M (x) O_pi(2)) = H^i(Y, M (x) Sym^2 F*G')"),
             ("serre-duality-X",)),
        rule("twist-absorption",
             f"Sym^2 F*G' = Sym^2 F*G (x) O_Y(0,{2 * p}), so the twist becomes ({a},{b})",
             _anchor("twist", "G' = G (x) O(0,1), F*O(0,1) = O(0,p)"),
             ("push-forward",)),
        computed("hypothesis-a-lt-p", f"a = 3 - p = {a} < p = {p}",
                 _anchor("injection-hypothesis", "a < p or b < -p"), "compare_lt", left=a, right=p),
    ]
    bound = h1_sym2FstarG_lower(a, b, p, n)
    for st in bound.steps:
        inputs = list(st.inputs)
        if st.label == "injection-Sym2B-Sym2G":
            inputs.append("hypothesis-a-lt-p")
        anchor = _anchor(st.label, st.statement)
        if st.status == "COMPUTED":
            op, args = st.recipe
            nodes.append(computed(st.label, st.statement, anchor, op, inputs, **args))
        else:
            nodes.append(CertificateNode(st.label, st.status, st.statement, anchor, tuple(inputs),
                                         {"dims": dict(st.payload.get("dims", {})), "bounds": {}}))
    nodes.append(computed(
        "h1-Sym2FstarG-solver",
        f"sequence solver: h^1(Y, Sym2F*G({a},{b})) in {bound.interval}",
        _anchor("les-interval", "0 -> E -> Sym2F*B -> Sym2F*G -> 0"),
        "les", (), kind="Sym2FstarG", a=a, b=b, degree=1, p=p, n=n))
    lower = bound.lower
    holds = lower >= 1
    nodes.append(rule(
        "h5-X-omega2",
        f"h^5(X, omega_X^2) = h^1(Y, Sym2F*G({a},{b})) >= {lower}"
        + ("" if holds else " (no positive lower bound)"),
        _anchor("non-vanishing", "H^5(X, omega_X^2) != 0"),
        ("twist-absorption", "injection-Sym2B-Sym2G", "h1-Sym2FstarG-solver"),
        {"lower": lower, "holds": int(holds)}))
    verdict = {
        "statement": "h^5(X, omega_X^2) != 0",
        "holds": holds,
        "lower_bound": lower,
        "gap": bound.base.gap,
        "twist": [a, b],
        "interval": bound.interval.to_json(),
        "e_route": bound.e_route,
    }
    if not holds:
        verdict["diagnostic"] = (
            f"falsified: dim im eta1 - dim im eta2 = {bound.base.gap} at ({a},{b}) and the sequence "
            f"solver gives h^1(Y, Sym2F*G({a},{b})) in {bound.interval}, so h^5(X, omega_X^2) "
            f"has no positive lower bound")
    elif bound.base.gap < 1:
        verdict["note"] = (f"the eta-image gap is {bound.base.gap}; the bound {lower} comes from the "
                           f"global-section map of 0 -> Sym2F*B -> Fsym -> F*B(0,p) -> 0")
    return nodes, verdict


def theorem_kod_fails(p: int, n: int = 3) -> Certificate:
    """Certificate for h^5(X, omega_X^2) != 0 when 2 <= p <= n = 3."""
    nodes, verdict = _theorem_nodes(p, n)
    cert = Certificate("theorem-kod-fails", {"p": p, "n": n}, nodes, verdict)
    cert.check_dag()
    return cert


def _violation_nodes(p: int, n: int):
    RingParams(p, n)
    w = fano_witness(p, n)
    if not w:
        raise HypothesisFailed(f"-omega_X = {w.result} does not match the very-ample pattern (1,1;q>0)")
    nodes, theorem = _theorem_nodes(p, n)
    anti = w.result
    nodes += [
        computed("fano-witness", f"-omega_X = {anti}", _anchor("fano", "-omega_X = (1,1;2)"),
                 "fano", p=p, n=n),
        rule("very-ample",
             f"-omega_X = {anti} is of the form (1,1;q) with q > 0, hence very ample (cited pattern)",
             _anchor("very-ample-pattern", "pi^*O_Y(1,1) (x) O_pi(q) very ample for q > 0"),
             ("fano-witness",), {"pattern": int(very_ample_pattern(anti))}),
        rule("kodaira-violation",
             f"L = omega_X^(-2) is ample and h^5(X, L^(-1)) >= {theorem['lower_bound']} with 5 < dim X = "
             f"{dim_X(n)}",
             _anchor("violation", "exists i < dim X with H^i(X, L^(-1)) != 0"),
             ("very-ample", "h5-X-omega2", "dim-X"),
             {"i": 5, "holds": int(theorem["holds"])}),
    ]
    verdict = dict(theorem)
    verdict["statement"] = "omega_X^(-2) violates Kodaira vanishing"
    verdict["i"] = 5
    verdict["fano"] = True
    return nodes, verdict


def kodaira_violation(p: int = 2, n: int = 3) -> Certificate:
    nodes, verdict = _violation_nodes(p, n)
    cert = Certificate("kodaira-violation", {"p": p, "n": n}, nodes, verdict)
    cert.check_dag()
    return cert


def cone_certificate(p: int = 2, n: int = 3) -> ConeReport:
    """Cone Z over X with respect to L = omega_X^(-1): dimension, index, not-CM witness."""
    nodes, viol = _violation_nodes(p, n)
    lower = viol["lower_bound"]
    not_cm = lower >= 1
    nodes += [
        computed("dim-Z", f"dim Z = dim X + 1 = {dim_X(n) + 1}", _anchor("cone-dimension", "dim Z = dim X + 1"),
                 "dim_Z", n=n),
        computed("index", "omega_X = L^(-1) with L = omega_X^(-1), so r = 1",
                 _anchor("index", "K_Z Q-Cartier of index at most r when omega_X = L^(-r)"),
                 "index", ("omega-X",), p=p, n=n),
        rule("omega-Z-line-bundle", "r = 1, so omega_Z is a line bundle",
             _anchor("index-rule", "omega_X = L^(-1) gives omega_Z invertible"),
             ("index", "very-ample"), {"index": 1}),
        rule("not-CM",
             f"h^5(X, L^(-2)) >= {lower} with 0 < 5 < dim X, so Z is not Cohen-Macaulay"
             + ("" if not_cm else " (not established)"),
             _anchor("not-cm", "H^i(X, L^q) != 0 for some 0 < i < dim X gives Z not CM"),
             ("kodaira-violation", "dim-Z"), {"i": 5, "q": -2, "holds": int(not_cm)}),
        CertificateNode(
            "canonical", "ASSUMED", "Z has canonical (klt) singularities",
            _anchor("canonical", "-K_X ample with index 1 gives canonical cone singularities"),
            ("omega-Z-line-bundle",), {"dims": {}, "bounds": {}},
            citation="klt criterion for cones over Fano varieties (cited; boundary construction not checked)"),
    ]
    verdict = {
        "dim_Z": dim_X(n) + 1,
        "omega_Z_line_bundle": True,
        "index": 1,
        "not_CM": not_cm,
        "witness": {"i": 5, "q": -2, "power": 2, "lower_bound": lower},
        "canonical": "ASSUMED",
        "full_CM_criterion_checkable": False,
    }
    if not not_cm:
        verdict["diagnostic"] = viol.get("diagnostic", "no positive lower bound")
    cert = Certificate("cone-certificate", {"p": p, "n": n}, nodes, verdict)
    cert.check_dag()
    if cert.depends_on_assumed("not-CM"):
        raise AssertionError("not-CM must not rest on ASSUMED nodes")
    assumed = [nd.id for nd in nodes if nd.status == "ASSUMED"]
    return ConeReport(dim_X(n) + 1, not_cm, verdict["witness"], 1, True, assumed, cert)


# --------------------------------------------------------------------------
# Cohen-Macaulay window


WINDOW = (-2, -1, 0, 1)


def cm_window(p: int = 2, n: int = 3, q: int | None = None) -> dict:
    """h^i(X, L^q) for 0 < i < dim X, L = omega_X^(-1), q in the computable window.

    q = 0 uses O_Y, q = 1 the Sym^2 chain, q = -1, -2 Serre duality to q = 0, 1.
    Returns {q: [DimInterval for i = 1 .. dim X - 1]}.
    """
    RingParams(p, n)
    if n != 3:
        raise InvalidParams("the window is computed for n = 3 only")
    qs = WINDOW if q is None else (q,)
    for v in qs:
        if v not in WINDOW:
            raise WindowExceeded(f"q = {v} is outside the computable window -2..1 "
                                 f"(it needs symmetric powers above Sym^2)")
    dX = dim_X(n)
    L = -omega_X(p, n).result
    if L.c != 2:
        raise InvalidParams(f"L = {L} is not of relative degree 2")
    twist = (L.a, L.b + 2 * p)

    def row(v: int) -> list[DimInterval]:
        if v == 0:
            return [DimInterval.exact(h_Y(n, (0, 0), i, p)) for i in range(1, dX)]
        if v == 1:
            coh = bundles.calculus(p, n).cohomology(Sheaf("Sym2FstarG", twist))
            return [coh[i] if i < len(coh) else DimInterval.exact(0) for i in range(1, dX)]
        # Serre duality: h^i(X, L^v) = h^(dX - i)(X, omega_X (x) L^(-v)) = h^(dX - i)(X, L^(-v-1))
        dual = row(-v - 1)
        return [dual[dX - i - 1] for i in range(1, dX)]

    return {v: row(v) for v in qs}


def window_witnesses(table: dict) -> list[tuple[int, int, int]]:
    """(q, i, lower) for every entry with a positive certified lower bound."""
    out = []
    for v in sorted(table):
        for i, iv in enumerate(table[v], start=1):
            if iv.lower >= 1:
                out.append((v, i, iv.lower))
    return out


# --------------------------------------------------------------------------
# serialization


def _canonical_json(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n").encode()


def emit(cert: Certificate, format: str = "json") -> bytes:
    """Canonical JSON (sorted keys) or CSV with one node per row."""
    if format == "json":
        return _canonical_json(cert.to_json())
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "status", "statement", "inputs", "location", "dims", "bounds"])
        for nd in cert.nodes:
            js = nd.to_json()
            w.writerow([nd.id, nd.status, nd.statement, ";".join(nd.inputs), nd.anchor["location"],
                        json.dumps(js["payload"]["dims"], sort_keys=True),
                        json.dumps(js["payload"]["bounds"], sort_keys=True)])
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {format!r}")


def load_schema() -> dict:
    text = resources.files("kvcert").joinpath("certificate.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict) -> None:
    """Raise jsonschema.ValidationError if ``doc`` does not match the shipped schema."""
    import jsonschema

    jsonschema.validate(doc, load_schema())


def replay(doc: dict) -> list[str]:
    """Recompute every COMPUTED node of a serialized certificate; return mismatching ids."""
    bad = []
    for nd in doc["nodes"]:
        if nd["status"] != "COMPUTED":
            continue
        r = nd["recipe"]
        again = run_recipe(r["op"], r["args"])
        if json.loads(json.dumps(again, sort_keys=True)) != nd["payload"]:
            bad.append(nd["id"])
    return bad
