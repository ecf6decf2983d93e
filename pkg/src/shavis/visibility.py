"""The theorem engine: hypothesis verdicts and visibility certificates.

Each supported theorem has a fixed list of labeled hypotheses. A certificate
carries one verdict per hypothesis (holds / fails / inconclusive /
unverified-user-asserted), the concluded lower bound on the visible subgroup
of the Shafarevich-Tate group, and enough evidence to re-check every verdict
without re-running the tool. The auxiliary abelian surface (A x B)/A[p] is
never constructed: the congruence certificate is the witness that the shared
p-torsion is meaningful, and every other hypothesis is local or about ranks.

Ranks are consumed from records with explicit provenance and are the trust
boundary: a certificate is only as strong as its rank records, and says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, congruence, curves, dataio, fields, localdata
from .arith import ArithmeticError_
from .curves import WeierstrassModel

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"
USER_ASSERTED = "unverified-user-asserted"

CERTIFIED = "certified"
FAILED = "failed"
PARTIAL = "partial"

SCHEMA_VERSION = 1
TOOL_NAME = "shavis"
TOOL_VERSION = "0.1.0"

#: Labeled hypotheses per theorem; certificates carry exactly these ids
#: (the lie theorem appends one per bad prime).
THEOREM_HYPOTHESES = {
    "improv": ["A.a", "A.b", "A.c", "A.d", "I.tamagawa"],
    "quadratic": ["A.a", "A.b", "A.c", "A.d", "Q.i", "Q.ii", "Q.iii"],
    "nontrivial": ["N.good-p", "N.congruence", "N.ramification", "N.conductor",
                   "N.irreducible", "N.rank-gap"],
    "nontrivial1": ["N1.good-p", "N1.congruence", "N1.ramification", "N1.a",
                    "N1.b", "N1.c", "N1.d"],
    "exten": ["A.a", "A.b", "A.c", "A.d", "E.i", "E.ii"],
    "lie": ["A.a", "A.b", "A.c", "A.d"],
}


class ScenarioError(ValueError):
    """Scenario file fails validation before any computation runs."""


@dataclass(frozen=True)
class HypothesisVerdict:
    id: str
    status: str
    evidence: dict

    def to_json(self) -> dict:
        return {"id": self.id, "status": self.status, "evidence": self.evidence}


@dataclass(frozen=True)
class VisibilityScenario:
    name: str
    theorem: str
    curve_a: WeierstrassModel
    curve_b: WeierstrassModel
    n: int
    base_field: fields.NumberFieldDescriptor  # L
    field_k: fields.NumberFieldDescriptor  # K
    target_quadratic: fields.NumberFieldDescriptor | None = None
    target_kummer: fields.NumberFieldDescriptor | None = None
    target_tower: fields.TowerDescriptor | None = None
    rank_records: tuple = ()
    user_assertions: tuple = ()
    mode: str = congruence.HEURISTIC
    congruence_limit: int | None = None
    evidence_level: str = "summary"

    def __post_init__(self):
        if self.theorem not in THEOREM_HYPOTHESES:
            raise ScenarioError(f"unknown theorem {self.theorem!r}")
        if self.n % 2 == 0 or self.n < 3:
            raise ScenarioError(f"n must be odd and > 1, got {self.n}")
        if not arith.is_squarefree(self.n):
            raise ScenarioError(f"composite n must be squarefree, got {self.n}")
        if curves.minimal_model(self.curve_a)[0] == curves.minimal_model(self.curve_b)[0]:
            raise ScenarioError("curves A and B coincide as minimal models")
        if self.theorem == "quadratic" and self.target_quadratic is None:
            raise ScenarioError("quadratic theorem needs a quadratic target field")
        if self.theorem == "exten" and self.target_kummer is None:
            raise ScenarioError("exten theorem needs a kummer target field")
        if self.theorem == "lie" and self.target_tower is None:
            raise ScenarioError("lie theorem needs a tower target")

    @property
    def n_primes(self) -> list[int]:
        return arith.prime_divisors(self.n)

    def field_m(self) -> fields.NumberFieldDescriptor | None:
        return self.target_quadratic or self.target_kummer

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "theorem": self.theorem,
            "n": self.n,
            "curve_a": [str(a) for a in self.curve_a.ainvs()],
            "curve_b": [str(a) for a in self.curve_b.ainvs()],
            "base_field": self.base_field.to_json(),
            "field_k": self.field_k.to_json(),
            "rank_records": [dict(r) for r in self.rank_records],
            "user_assertions": [dict(u) for u in self.user_assertions],
            "options": {
                "mode": self.mode,
                "congruence_bound": self.congruence_limit,
                "evidence": self.evidence_level,
            },
        }
        if self.target_quadratic:
            out["target"] = self.target_quadratic.to_json()
        elif self.target_kummer:
            out["target"] = self.target_kummer.to_json()
        elif self.target_tower:
            out["target"] = self.target_tower.to_json()
        return out


@dataclass(frozen=True)
class VisibilityCertificate:
    scenario: VisibilityScenario
    verdicts: tuple[HypothesisVerdict, ...]
    conclusion: dict
    overall: str
    rank_provenance: tuple = ()

    def verdict(self, vid: str) -> HypothesisVerdict:
        for v in self.verdicts:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def failed_ids(self) -> list[str]:
        return [v.id for v in self.verdicts if v.status == FAILS]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "scenario": self.scenario.to_json(),
            "theorem": self.scenario.theorem,
            "verdicts": [v.to_json() for v in self.verdicts],
            "conclusion": self.conclusion,
            "overall": self.overall,
            "rank_provenance": list(self.rank_provenance),
        }


def _overall(verdicts) -> str:
    statuses = {v.status for v in verdicts}
    if FAILS in statuses:
        return FAILED
    if INCONCLUSIVE in statuses:
        return PARTIAL
    return CERTIFIED


def _record_user_assertions(scenario) -> list[HypothesisVerdict]:
    out = []
    for ua in scenario.user_assertions:
        out.append(
            HypothesisVerdict(
                ua.get("id", "user-assertion"),
                USER_ASSERTED,
                {"statement": ua.get("statement", "")},
            )
        )
    return out


class _Engine:
    """Shared hypothesis evaluation for one scenario."""

    def __init__(self, scenario: VisibilityScenario, dataset: dataio.Dataset | None = None,
                 search_height: int = 2000, remote: "dataio.RemoteClient | None" = None):
        self.s = scenario
        self.a_min = curves.minimal_model(scenario.curve_a)[0]
        self.b_min = curves.minimal_model(scenario.curve_b)[0]
        self.n_a, self.locs_a = localdata.conductor(self.a_min)
        self.n_b, self.locs_b = localdata.conductor(self.b_min)
        self.dataset = dataset
        self.rank_uses: list[dict] = []
        user_recs = []
        for r in scenario.rank_records:
            user_recs.append(
                dataio.RankRecord(
                    WeierstrassModel.from_list([Fraction(x) for x in r["curve"]]),
                    _field_from_json(r["field"]),
                    int(r["rank"]),
                    r.get("provenance", "user"),
                )
            )
        self.sources = dataio.RankSources(
            dataset=dataset, user_records=user_recs, remote=remote,
            search_height=search_height,
        )

    # ---- rank plumbing

    def rank(self, model: WeierstrassModel, field: fields.NumberFieldDescriptor):
        rec = dataio.rank_over(model, field, self.sources)
        blob = rec.to_json()
        if blob not in self.rank_uses:
            self.rank_uses.append(blob)
        return rec

    # ---- assumption block (shared by improv/quadratic/exten/lie)

    def assumption_a(self) -> HypothesisVerdict:
        """B[n] contained in A and congruent: one congruence proof per p | n."""
        certs = {}
        ok = True
        for p in self.s.n_primes:
            cert = congruence.verify_congruence(
                self.a_min, self.b_min, p, mode=self.s.mode, bound=self.s.congruence_limit
            )
            certs[p] = cert
            ok = ok and cert.certified
        evidence = {
            "statement": f"A[{self.s.n}] = B[{self.s.n}] as Galois modules, realized prime by prime",
            "congruence": {str(p): c.to_json(self.s.evidence_level) for p, c in certs.items()},
        }
        return HypothesisVerdict("A.a", HOLDS if ok else FAILS, evidence)

    def assumption_b(self, vid="A.b") -> HypothesisVerdict:
        res = fields.check_ramification_condition(self.s.base_field, self.s.n)
        ev = {
            "statement": f"e_p(L) < p-1 for p | {self.s.n} with L = {self.s.base_field.describe()}",
            "primes": {str(p): d for p, d in res["primes"].items()},
        }
        return HypothesisVerdict(vid, HOLDS if res["holds"] else FAILS, ev)

    def assumption_c(self) -> HypothesisVerdict:
        bad = sorted(set(l.q for l in self.locs_a) | set(l.q for l in self.locs_b))
        n_l = 1
        for q in bad:
            n_l *= q
        g = math.gcd(self.s.n, n_l)
        ev = {
            "statement": f"gcd(n, N(L)) = 1 with N(L) from bad primes {bad}",
            "gcd": g,
        }
        if self.s.base_field.kind != "rationals":
            ev["note"] = "bad primes computed over Q, a conservative superset for L"
        return HypothesisVerdict("A.c", HOLDS if g == 1 else FAILS, ev)

    def torsion_vanishes(self, field: fields.NumberFieldDescriptor) -> tuple[str, dict]:
        """B(field)[n] = 0 and (J/B)(field)[n] = 0, via irreducibility first.

        A[p] = B[p] and J/B is isogenous to A, so irreducibility of A[p] over
        the field covers every group involved. The fallback is a direct
        rational p-torsion search through the quadratic twist decomposition.
        """
        detail = {}
        status = HOLDS
        for p in self.s.n_primes:
            verdict = congruence.irreducible_mod_p(self.a_min, p, field)
            detail[str(p)] = verdict.to_json()
            if verdict.status == "Irreducible":
                continue
            if verdict.status == "ReducibleDetected":
                status = FAILS
                continue
            # fallback: explicit torsion search
            fallback = self._torsion_search(field, p)
            detail[str(p)]["fallback"] = fallback
            if fallback["status"] == FAILS:
                status = FAILS
            elif fallback["status"] == INCONCLUSIVE and status == HOLDS:
                status = INCONCLUSIVE
        return status, detail

    def _torsion_search(self, field, p) -> dict:
        models = {"A": self.a_min, "B": self.b_min}
        if field.kind == "quadratic":
            d = arith.squarefree_part(field.disc)
        elif field.kind == "cyclotomic" and field.p == 3:
            d = -3  # Q(mu_3) = Q(sqrt(-3))
        elif field.kind == "rationals":
            d = None
        else:
            return {"status": INCONCLUSIVE,
                    "note": f"no torsion decomposition over {field.describe()}"}
        if d is not None:
            models["A-twist"] = curves.minimal_model(curves.quadratic_twist(self.a_min, d))[0]
            models["B-twist"] = curves.minimal_model(curves.quadratic_twist(self.b_min, d))[0]
        found = {}
        for name, m in models.items():
            pts = [
                str(x)
                for x in congruence.rational_division_roots(m, p)
                if congruence.has_rational_point_with_x(m, x)
            ]
            if pts:
                found[name] = pts
        if found:
            return {"status": FAILS, "rational_p_torsion": found}
        return {"status": HOLDS, "note": f"no rational {p}-torsion on any factor"}

    def assumption_d(self, over=None, vid="A.d") -> HypothesisVerdict:
        field = over or self.s.field_k
        status, detail = self.torsion_vanishes(field)
        ev = {
            "statement": f"B({field.describe()})[n] = 0 and (J/B)({field.describe()})[n] = 0",
            "per_prime": detail,
        }
        return HypothesisVerdict(vid, status, ev)

    def tamagawa_condition(self, model_a, model_b, field, restrict=None,
                           vid="I.tamagawa") -> HypothesisVerdict:
        verdicts = {}
        status = HOLDS
        for name, m in (("A", model_a), ("B", model_b)):
            per_prime = {}
            for p in self.s.n_primes:
                tv = localdata.is_p_unit_tamagawa(m, p, field, restrict_to=restrict)
                per_prime[str(p)] = tv.to_json()
                if tv.offending:
                    status = FAILS
                elif tv.inconclusive and status != FAILS:
                    status = INCONCLUSIVE
            verdicts[name] = per_prime
        ev = {
            "statement": f"n coprime to all Tamagawa numbers over {field.describe()}"
            + (f" at primes dividing {restrict}" if restrict else ""),
            "curves": verdicts,
        }
        return HypothesisVerdict(vid, status, ev)


def _field_from_json(blob: dict) -> fields.NumberFieldDescriptor:
    kind = blob.get("kind")
    if kind == "rationals":
        return fields.RATIONALS
    if kind == "quadratic":
        return fields.quadratic_field(int(blob["d"]))
    if kind == "cyclotomic":
        return fields.cyclotomic_field(int(blob["p"]))
    if kind == "kummer":
        return fields.kummer_layer(int(blob["p"]), int(blob["m"]))
    raise ScenarioError(f"unknown field kind {kind!r}")


def _tower_from_json(blob: dict) -> fields.TowerDescriptor:
    kind = blob.get("kind")
    if kind == "cyclotomic_zp":
        return fields.TowerDescriptor("cyclotomic_zp", p=int(blob["p"]))
    if kind == "false_tate":
        return fields.TowerDescriptor("false_tate", p=int(blob["p"]), m=int(blob["m"]))
    raise ScenarioError(f"unknown tower kind {kind!r}")


# ---------------------------------------------------------------------------
# theorem drivers

def verify_theorem_quadratic(scenario: VisibilityScenario,
                             dataset: dataio.Dataset | None = None,
                             remote: dataio.RemoteClient | None = None) -> VisibilityCertificate:
    """Visible elements over a quadratic extension M of K via twists.

    Hypotheses A.a-A.d plus (i) torsion vanishing over M, (ii) n coprime to
    the Tamagawa numbers of the twisted curves over K, (iii) [M:K] coprime
    to n. The conclusion bounds the visible subgroup of Sha(A/M) from below
    by n^(rank B_chi(K) - rank A_chi(K)).
    """
    if scenario.field_k.kind != "rationals":
        raise ScenarioError("quadratic theorem path supports K = Q; twists of curves "
                            "over bigger K are out of scope")
    eng = _Engine(scenario, dataset, remote=remote)
    s = scenario
    m_field = s.target_quadratic
    d = arith.squarefree_part(m_field.disc)
    a_tw = curves.minimal_model(curves.quadratic_twist(eng.a_min, d))[0]
    b_tw = curves.minimal_model(curves.quadratic_twist(eng.b_min, d))[0]

    verdicts = [eng.assumption_a(), eng.assumption_b(), eng.assumption_c()]
    q_i = eng.assumption_d(over=m_field, vid="Q.i")
    # A.d (over K) is implied by torsion vanishing over M, since K sits inside M
    verdicts.append(
        HypothesisVerdict(
            "A.d",
            q_i.status,
            {"statement": "torsion vanishing over K, implied by Q.i since K is a subfield of M",
             "inherited_from": "Q.i"},
        )
    )
    verdicts.append(q_i)
    verdicts.append(
        eng.tamagawa_condition(a_tw, b_tw, s.field_k, vid="Q.ii")
    )
    g = math.gcd(2, s.n)
    verdicts.append(
        HypothesisVerdict(
            "Q.iii",
            HOLDS if g == 1 else FAILS,
            {"statement": "order of Gal(M/K) = 2 is coprime to odd n", "gcd": g},
        )
    )
    verdicts.extend(_record_user_assertions(s))

    rank_a = eng.rank(a_tw, fields.RATIONALS)
    rank_b = eng.rank(b_tw, fields.RATIONALS)
    gap = rank_b.rank - rank_a.rank
    conclusion = _order_conclusion(
        s, gap, rank_a.rank,
        target_desc=f"Vis_J(Sha(A/{m_field.describe()}))",
        twisted=(str(a_tw), str(b_tw)),
    )
    overall = _degrade_search_rank(conclusion, _overall(verdicts), rank_a)
    return VisibilityCertificate(s, tuple(verdicts), conclusion, overall,
                                 tuple(dict(r) for r in eng.rank_uses))


def verify_theorem_improv(scenario: VisibilityScenario,
                          dataset: dataio.Dataset | None = None,
                          remote: dataio.RemoteClient | None = None) -> VisibilityCertificate:
    """Base visibility theorem over K itself (no twist, no extension)."""
    eng = _Engine(scenario, dataset, remote=remote)
    s = scenario
    verdicts = [eng.assumption_a(), eng.assumption_b(), eng.assumption_c(),
                eng.assumption_d()]
    verdicts.append(
        eng.tamagawa_condition(eng.a_min, eng.b_min, s.field_k, vid="I.tamagawa")
    )
    verdicts.extend(_record_user_assertions(s))
    rank_a = eng.rank(eng.a_min, s.field_k)
    rank_b = eng.rank(eng.b_min, s.field_k)
    gap = rank_b.rank - rank_a.rank
    conclusion = _order_conclusion(
        s, gap, rank_a.rank, target_desc=f"Vis_J(Sha(A/{s.field_k.describe()}))"
    )
    overall = _degrade_search_rank(conclusion, _overall(verdicts), rank_a)
    return VisibilityCertificate(s, tuple(verdicts), conclusion, overall,
                                 tuple(dict(r) for r in eng.rank_uses))


def _uses_search_bound(record) -> bool:
    if record.provenance == "point-search-lower-bound":
        return True
    return any(_uses_search_bound(s) for s in record.summands)


def _degrade_search_rank(conclusion: dict, overall: str, *a_side_records) -> str:
    """A point-search rank is a lower bound, but the kernel bound n^rank(A)
    needs an upper bound on the A-side rank: degrade to partial and say so."""
    if any(_uses_search_bound(r) for r in a_side_records):
        conclusion["caveat"] = (
            "rank of A resolved only as a point-search lower bound; the kernel "
            "bound needs an upper bound, so supply a proved rank record"
        )
        if overall == CERTIFIED:
            return PARTIAL
    return overall


def _order_conclusion(s, gap, rank_a, target_desc, twisted=None, image_rank=None,
                      kernel_rank_bound=None) -> dict:
    n = s.n
    if image_rank is not None:
        vacuous = image_rank <= 0
        min_order = 1 if vacuous else n**image_rank
        kernel_bound = n**kernel_rank_bound
    else:
        vacuous = gap <= 0
        min_order = 1 if vacuous else n**gap
        kernel_bound = n**rank_a
    statement = (
        f"no nontrivial lower bound (rank gap {gap} <= 0)" if vacuous
        else f"{target_desc} contains a subgroup of order >= {min_order}"
    )
    out = {
        "min_visible_order": min_order,
        "kernel_bound": kernel_bound,
        "rank_gap": gap,
        "vacuous": vacuous,
        "statement": statement,
    }
    if twisted:
        out["twisted_models"] = list(twisted)
    if image_rank is not None:
        out["image_rank"] = image_rank
        out["kernel_rank_bound"] = kernel_rank_bound
    return out


def verify_theorem_nontrivial(scenario: VisibilityScenario,
                              dataset: dataio.Dataset | None = None,
                              remote: dataio.RemoteClient | None = None) -> VisibilityCertificate:
    """Order-p elements of Sha(A/K) from conductor conditions on A[p].

    The plain variant demands that the prime-to-p conductor of A[p] equals
    both conductors over K = Q; the refined variant (nontrivial1) allows
    primes to drop from the conductor when the reduction there is non-split
    multiplicative, over K = Q or a quadratic K via the base-change rules.
    """
    s = scenario
    if s.theorem not in ("nontrivial", "nontrivial1"):
        raise ScenarioError(f"wrong driver for theorem {s.theorem}")
    refined = s.theorem == "nontrivial1"
    pre = "N1" if refined else "N"
    if s.field_k.kind not in ("rationals", "quadratic"):
        raise ScenarioError("nontrivial theorems support K = Q or quadratic K")
    if not refined and s.field_k.kind != "rationals":
        raise ScenarioError("plain nontrivial conductor comparison is computed over Q only")
    p = s.n
    if not arith.is_prime(p):
        raise ScenarioError("nontrivial theorems need prime n")
    eng = _Engine(scenario, dataset, remote=remote)

    verdicts = []
    good_a = eng.n_a % p != 0
    good_b = eng.n_b % p != 0
    verdicts.append(
        HypothesisVerdict(
            f"{pre}.good-p",
            HOLDS if good_a and good_b else FAILS,
            {"statement": f"both curves have good reduction at {p}",
             "N_A": eng.n_a, "N_B": eng.n_b},
        )
    )
    cong = eng.assumption_a()
    verdicts.append(HypothesisVerdict(f"{pre}.congruence", cong.status, cong.evidence))
    ram = eng.assumption_b(vid=f"{pre}.ramification")
    verdicts.append(ram)

    semistable_a = all(l.f == 1 for l in eng.locs_a)
    semistable_b = all(l.f == 1 for l in eng.locs_b)

    if refined:
        verdicts.append(_nonsplit_drop_condition(eng, p, s.field_k))
        verdicts.append(
            HypothesisVerdict(
                "N1.b",
                HOLDS if semistable_a and semistable_b else FAILS,
                {"statement": "A and B are semistable (squarefree conductors)",
                 "N_A": eng.n_a, "N_B": eng.n_b},
            )
        )
        irr = congruence.irreducible_mod_p(eng.a_min, p, s.field_k)
        verdicts.append(
            HypothesisVerdict(
                "N1.c",
                HOLDS if irr.status == "Irreducible"
                else FAILS if irr.status == "ReducibleDetected" else INCONCLUSIVE,
                {"statement": f"A[{p}] irreducible over {s.field_k.describe()}",
                 "verdict": irr.to_json()},
            )
        )
    else:
        verdicts.append(_conductor_equality_condition(eng, p))
        irr = congruence.irreducible_mod_p(eng.a_min, p, s.field_k)
        verdicts.append(
            HypothesisVerdict(
                "N.irreducible",
                HOLDS if irr.status == "Irreducible"
                else FAILS if irr.status == "ReducibleDetected" else INCONCLUSIVE,
                {"statement": f"A[{p}] irreducible over {s.field_k.describe()}",
                 "verdict": irr.to_json()},
            )
        )

    rank_a = eng.rank(eng.a_min, s.field_k)
    rank_b = eng.rank(eng.b_min, s.field_k)
    gap = rank_b.rank - rank_a.rank
    verdicts.append(
        HypothesisVerdict(
            f"{pre}.d" if refined else "N.rank-gap",
            HOLDS if gap > 0 else FAILS,
            {"statement": f"rank B({s.field_k.describe()}) > rank A({s.field_k.describe()})",
             "rank_A": rank_a.rank, "rank_B": rank_b.rank},
        )
    )
    verdicts.extend(_record_user_assertions(s))
    conclusion = _order_conclusion(
        s, gap, rank_a.rank, target_desc=f"Sha(A/{s.field_k.describe()})[{p}-primary]"
    )
    if gap > 0:
        conclusion["statement"] = (
            f"Sha(A/{s.field_k.describe()}) contains an element of order {p}; "
            f"visible subgroup of order >= {p**gap}"
        )
    overall = _degrade_search_rank(conclusion, _overall(verdicts), rank_a)
    return VisibilityCertificate(s, tuple(verdicts), conclusion, overall,
                                 tuple(dict(r) for r in eng.rank_uses))


def _nonsplit_drop_condition(eng: _Engine, p: int, field_k) -> HypothesisVerdict:
    """nontrivial1 (a): primes dropping from the mod-p conductor must be
    non-split multiplicative over K."""
    detail = {}
    status = HOLDS
    for name, model, n, locs in (("A", eng.a_min, eng.n_a, eng.locs_a),
                                 ("B", eng.b_min, eng.n_b, eng.locs_b)):
        if n % p == 0 or any(l.f != 1 for l in locs):
            detail[name] = {"status": INCONCLUSIVE, "note": "not semistable or bad at p"}
            status = INCONCLUSIVE if status == HOLDS else status
            continue
        nbar = congruence.mod_p_conductor_semistable(model, p)
        dropped = [l for l in locs if l.v_delta % p == 0]
        entry = {"N": n, "Nbar": nbar, "dropped_primes": [l.q for l in dropped]}
        bad = []
        for l in dropped:
            split = fields.splitting_data(field_k, l.q)
            # split multiplicative stays split; nonsplit becomes split iff the
            # residue degree is even
            nonsplit_over_k = (
                l.reduction_class == localdata.NONSPLIT_MULT and split.f % 2 == 1
            )
            if not nonsplit_over_k:
                bad.append(l.q)
        if bad:
            entry["split_at"] = bad
            status = FAILS
        detail[name] = entry
    return HypothesisVerdict(
        "N1.a",
        status,
        {"statement": "primes dividing N/Nbar are non-split multiplicative over K",
         "curves": detail},
    )


def _conductor_equality_condition(eng: _Engine, p: int) -> HypothesisVerdict:
    detail = {}
    status = HOLDS
    for name, model, n, locs in (("A", eng.a_min, eng.n_a, eng.locs_a),
                                 ("B", eng.b_min, eng.n_b, eng.locs_b)):
        if n % p == 0 or any(l.f != 1 for l in locs):
            detail[name] = {"status": INCONCLUSIVE, "note": "not semistable or bad at p"}
            status = INCONCLUSIVE if status == HOLDS else status
            continue
        nbar = congruence.mod_p_conductor_semistable(model, p)
        detail[name] = {"N": n, "Nbar": nbar}
        if nbar != n:
            status = FAILS
    if status == HOLDS and eng.n_a != eng.n_b:
        status = FAILS
        detail["note"] = "conductors of A and B differ"
    return HypothesisVerdict(
        "N.conductor",
        status,
        {"statement": "prime-to-p conductor of A[p] equals the conductors of A and of B",
         "curves": detail},
    )


def verify_theorem_exten(scenario: VisibilityScenario,
                         dataset: dataio.Dataset | None = None,
                         remote: dataio.RemoteClient | None = None) -> VisibilityCertificate:
    """Visible elements over a degree-p Kummer layer M = K(m^(1/p)).

    Beyond the assumption block: (i) the ramification index of M at primes
    dividing N/N_A is divisible by p, and (ii) p does not divide the Tamagawa
    numbers of A and B over K at primes dividing N_A. The kernel of the map
    is bounded through the Galois module structure of A(M).
    """
    s = scenario
    p = s.n
    if not arith.is_prime(p):
        raise ScenarioError("exten theorem needs prime n = p")
    kummer = s.target_kummer
    if kummer.p != p:
        raise ScenarioError(f"kummer layer prime {kummer.p} != scenario p {p}")
    if s.field_k != fields.cyclotomic_field(p):
        raise ScenarioError(
            f"kummer layers live over Q(mu_{p}); set field_k to cyclotomic {p}"
        )
    eng = _Engine(scenario, dataset, remote=remote)

    verdicts = [eng.assumption_a(), eng.assumption_b(), eng.assumption_c(),
                eng.assumption_d()]

    # (i): e_v(M) divisible by p at primes dividing N/N_A
    extra = sorted(set(l.q for l in eng.locs_b) - set(l.q for l in eng.locs_a))
    rami = {}
    ok = True
    for q in extra:
        try:
            e = fields.splitting_data(kummer, q).e
        except fields.UnsupportedFieldError as exc:
            rami[str(q)] = {"error": str(exc)}
            ok = False
            continue
        rami[str(q)] = {"e": e, "divisible_by_p": e % p == 0}
        ok = ok and e % p == 0
    verdicts.append(
        HypothesisVerdict(
            "E.i",
            HOLDS if ok else FAILS,
            {"statement": f"e_v({kummer.describe()}) divisible by {p} at primes dividing N/N_A",
             "primes": rami},
        )
    )
    # (ii): Tamagawa over K restricted to primes dividing N_A
    restrict = sorted(l.q for l in eng.locs_a)
    verdicts.append(
        eng.tamagawa_condition(eng.a_min, eng.b_min, s.field_k, restrict=restrict, vid="E.ii")
    )
    verdicts.extend(_record_user_assertions(s))

    try:
        rank_a_k = eng.rank(eng.a_min, s.field_k)
        rank_a_m = eng.rank(eng.a_min, kummer)
        rank_b_k = eng.rank(eng.b_min, s.field_k)
    except fields.UnsupportedFieldError as exc:
        conclusion = {
            "min_visible_order": 1,
            "kernel_bound": 1,
            "rank_gap": 0,
            "vacuous": True,
            "statement": f"rank records missing: {exc}",
        }
        overall = _overall(verdicts)
        if overall == CERTIFIED:
            overall = PARTIAL
        return VisibilityCertificate(s, tuple(verdicts), conclusion, overall,
                                     tuple(dict(r) for r in eng.rank_uses))
    kernel_rank = rank_a_k.rank + (rank_a_m.rank - rank_a_k.rank) // (p - 1)
    image_rank = max(rank_b_k.rank - kernel_rank, 0)
    conclusion = _order_conclusion(
        s, rank_b_k.rank - rank_a_k.rank, rank_a_k.rank,
        target_desc=f"Vis_J(Sha(A/{kummer.describe()}))",
        image_rank=image_rank, kernel_rank_bound=kernel_rank,
    )
    if image_rank > 0:
        inj = " (injective)" if kernel_rank == 0 else ""
        conclusion["statement"] = (
            f"image of rank >= {image_rank} in Vis_J(Sha(A/{kummer.describe()}))[{p}]{inj}"
        )
    return VisibilityCertificate(s, tuple(verdicts), conclusion, _overall(verdicts),
                                 tuple(dict(r) for r in eng.rank_uses))


def verify_theorem_lie(scenario: VisibilityScenario,
                       dataset: dataio.Dataset | None = None,
                       remote: dataio.RemoteClient | None = None) -> VisibilityCertificate:
    """Visibility over a p-adic Lie tower: per bad prime, either the Tamagawa
    numbers stay p-units up the tower (unramified stability) or the
    decomposition group has Lie dimension >= 2."""
    s = scenario
    p = s.n
    if not arith.is_prime(p):
        raise ScenarioError("lie theorem needs prime n = p")
    tower = s.target_tower
    if tower.p != p:
        raise ScenarioError(f"tower prime {tower.p} != scenario p {p}")
    eng = _Engine(scenario, dataset, remote=remote)
    base = tower.base

    verdicts = [eng.assumption_a(), eng.assumption_b(), eng.assumption_c(),
                eng.assumption_d(over=base)]

    bad = sorted(set(l.q for l in eng.locs_a) | set(l.q for l in eng.locs_b))
    locs_a = {l.q: l for l in eng.locs_a}
    locs_b = {l.q: l for l in eng.locs_b}
    for q in bad:
        entry = {}
        # branch 1: p-unit at the base layer plus unramified stability
        ramified_in_tower = (q == p) or (
            tower.kind == "false_tate" and tower.m % q == 0
        )
        units = True
        for name, locs, model in (("A", locs_a, eng.a_min), ("B", locs_b, eng.b_min)):
            if q not in locs:
                entry[name] = {"c": 1, "note": "good reduction"}
                continue
            split = fields.splitting_data(base, q)
            try:
                c = localdata.tamagawa_over_extension(
                    locs[q], localdata.LocalFieldExtension(q, split.e, split.f)
                )
                entry[name] = {"c_over_base": c}
                units = units and c % p != 0
            except localdata.UnsupportedBaseChangeError as exc:
                entry[name] = {"unsupported": str(exc)}
                units = False
        if units and not ramified_in_tower:
            entry["branch"] = "p-unit Tamagawa at the base, tower unramified at q"
            status = HOLDS
        else:
            dim = fields.decomposition_dimension(tower, q)
            entry["decomposition_dimension"] = dim
            if dim >= 2:
                entry["branch"] = "decomposition group of Lie dimension >= 2"
                status = HOLDS
            else:
                entry["branch"] = "neither branch applies"
                status = INCONCLUSIVE
        verdicts.append(HypothesisVerdict(f"L.v{q}", status, entry))

    verdicts.extend(_record_user_assertions(s))
    conclusion = {
        "statement": f"the visibility map lands in Vis_J(Sha(A/{tower.describe()}))",
        "min_visible_order": 1,
        "kernel_bound": 1,
        "rank_gap": 0,
        "vacuous": False,
        "injectivity": "injective when A has finitely many points up the tower "
                       "(user-assertable, not computed)",
    }
    return VisibilityCertificate(s, tuple(verdicts), conclusion, _overall(verdicts),
                                 tuple(dict(r) for r in eng.rank_uses))


def verify_lemma_twist(model: WeierstrassModel, d: int, p: int) -> list[HypothesisVerdict]:
    """Conditions under which every Tamagawa number of the twist is a p-unit,
    cross-checked against a direct computation on the twisted model."""
    if p == 2 or not arith.is_prime(p):
        raise ArithmeticError_(f"need an odd prime, got {p}")
    minimal, _ = curves.minimal_model(model)
    n, locs = localdata.conductor(minimal)
    if n % p == 0:
        raise ArithmeticError_(f"curve has bad reduction at p = {p}")
    n_chi = arith.fundamental_discriminant(d)
    out = []

    semistable = all(l.f == 1 for l in locs)
    if semistable:
        nbar = congruence.mod_p_conductor_semistable(minimal, p)
        ratio = n // nbar
        ok_i = math.gcd(nbar, ratio) == 1 and arith.is_squarefree(ratio)
        out.append(HypothesisVerdict(
            "T.i", HOLDS if ok_i else FAILS,
            {"statement": "Nbar coprime to N/Nbar and N/Nbar squarefree",
             "Nbar": nbar, "N_over_Nbar": ratio}))
        dropped = [l for l in locs if l.v_delta % p == 0]
        bad_ii = []
        for l in dropped:
            nonsplit_in_m = arith.kronecker_symbol(n_chi, l.q) == -1
            if nonsplit_in_m != (l.reduction_class == localdata.SPLIT_MULT):
                bad_ii.append(l.q)
        out.append(HypothesisVerdict(
            "T.ii", HOLDS if not bad_ii else FAILS,
            {"statement": "q | N/Nbar non-split in M iff A split multiplicative at q",
             "dropped": [l.q for l in dropped], "violations": bad_ii}))
    else:
        out.append(HypothesisVerdict(
            "T.i", INCONCLUSIVE,
            {"statement": "Nbar computation needs a semistable curve", "N": n}))
        out.append(HypothesisVerdict("T.ii", INCONCLUSIVE, {"inherited": "T.i"}))

    g = math.gcd(n_chi, p * n)
    out.append(HypothesisVerdict(
        "T.iii", HOLDS if g == 1 else FAILS,
        {"statement": "N_chi coprime to p*N_A", "N_chi": n_chi, "gcd": g}))
    if p > 3:
        parity = HypothesisVerdict("T.parity", HOLDS, {"statement": "p > 3"})
    else:
        parity = HypothesisVerdict(
            "T.parity", HOLDS if n_chi % 2 == 1 else FAILS,
            {"statement": "p = 3 requires odd N_chi", "N_chi": n_chi})
    out.append(parity)

    applicable = all(v.status == HOLDS for v in out)
    twisted = curves.minimal_model(curves.quadratic_twist(minimal, arith.squarefree_part(d)))[0]
    direct = localdata.is_p_unit_tamagawa(twisted, p, fields.RATIONALS)
    consistent = (not applicable) or direct.all_coprime
    out.append(HypothesisVerdict(
        "T.conclusion",
        HOLDS if (applicable and direct.all_coprime) else
        (INCONCLUSIVE if not applicable else FAILS),
        {"statement": f"all Tamagawa numbers of the twist are {p}-adic units",
         "lemma_applicable": applicable,
         "direct_check": direct.to_json(),
         "consistent": consistent}))
    if applicable and not direct.all_coprime:
        raise AssertionError(
            f"lemma hypotheses hold but direct Tamagawa check fails for twist by {d}: "
            f"{direct.to_json()}"
        )
    return out


def check_analytic_divisibility(certificate: VisibilityCertificate,
                                l_ratio: Fraction,
                                derivative_order: int = 0) -> dict:
    """Divisibility check on a user-supplied algebraic L-ratio.

    Requires a certified order-p certificate from one of the nontrivial
    theorems; asserts p divides the numerator of the supplied ratio (the
    L-value itself is never computed here).
    """
    if certificate.scenario.theorem not in ("nontrivial", "nontrivial1"):
        raise ArithmeticError_("analytic divisibility needs a nontrivial-theorem certificate")
    if certificate.overall != CERTIFIED:
        raise ArithmeticError_(f"prerequisite certificate is {certificate.overall}, not certified")
    if derivative_order not in (0, 1):
        raise ArithmeticError_("derivative order must be 0 or 1")
    p = certificate.scenario.n
    l_ratio = Fraction(l_ratio)
    val = arith.valuation(l_ratio.numerator, p) if l_ratio != 0 else arith.INFINITY
    consistent = l_ratio == 0 or val >= 1
    quantity = (
        "L(A,1)/Omega_A" if derivative_order == 0
        else "L'(A,1)/(R(A/Q) * Omega_A), L(A,s) having a simple zero at s = 1"
    )
    return {
        "p": p,
        "quantity": quantity,
        "l_ratio": str(l_ratio),
        "valuation_at_p": "inf" if val == arith.INFINITY else int(val),
        "consistent": consistent,
        "note": (
            f"{p} divides the numerator, as the certified certificate predicts"
            if consistent
            else f"{p} does not divide the numerator: contradicts the certificate, "
                 "check the supplied ratio and rank records"
        ),
    }


DRIVERS = {
    "improv": verify_theorem_improv,
    "quadratic": verify_theorem_quadratic,
    "nontrivial": verify_theorem_nontrivial,
    "nontrivial1": verify_theorem_nontrivial,
    "exten": verify_theorem_exten,
    "lie": verify_theorem_lie,
}


def verify_scenario(scenario: VisibilityScenario,
                    dataset: dataio.Dataset | None = None,
                    remote: dataio.RemoteClient | None = None) -> VisibilityCertificate:
    cert = DRIVERS[scenario.theorem](scenario, dataset, remote)
    _check_schema(cert)
    return cert


def _check_schema(cert: VisibilityCertificate):
    """Certificate completeness: ids must exactly match the theorem schema."""
    expected = list(THEOREM_HYPOTHESES[cert.scenario.theorem])
    got = [v.id for v in cert.verdicts if v.status != USER_ASSERTED]
    if cert.scenario.theorem == "lie":
        base = [g for g in got if not g.startswith("L.v")]
        assert base == expected, f"verdict ids {base} != schema {expected}"
    else:
        assert got == expected, f"verdict ids {got} != schema {expected}"
