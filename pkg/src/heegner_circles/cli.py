"""Command-line surface: identity verification, circle dumps, radius
surveys, circle-problem counts, shifted-pair curves, and SVG figures.

Every command is deterministic: identical flags produce byte-identical
output.  Exit codes: 0 success, 1 a verified identity failed, 2 usage.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import random
import sys
from dataclasses import dataclass

from . import bnumbers, circles, equidist, halfplane, quadfield
from .circles import Radius
from .halfplane import UnimodularMatrix
from .quadfield import CLASS_NUMBER_ONE_Q, Discriminant, field

SCHEMA_VERSION = "1"

PALETTE = ("#e858a2", "#a8653a", "#3c6fd1", "#3ba05d", "#8458c9",
           "#d98032", "#4fa3b8", "#b8485d", "#7a7a32")


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    rows_emitted: int


# ---------------------------------------------------------------------------
# Output plumbing

def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _csv(schema: str, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {schema} v{SCHEMA_VERSION}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, bool):
        return "1" if v else "0"
    return str(v)


def _json_doc(command: str, q, rows: list[dict], extra: dict | None = None) -> str:
    meta = {"q": q, "command": command, "version": SCHEMA_VERSION}
    if extra:
        meta.update(extra)
    return json.dumps({"meta": meta, "rows": rows}, sort_keys=True,
                      separators=(",", ":")) + "\n"


def _selected_fields(qflag: str) -> list[Discriminant]:
    if qflag == "all":
        return quadfield.all_fields()
    return [field(int(qflag))]


# ---------------------------------------------------------------------------
# verify: the cross-module identity suite

def _random_matrices(rng: random.Random, count: int, bound: int) -> list[UnimodularMatrix]:
    out = []
    while len(out) < count:
        c = rng.randint(-bound, bound)
        d = rng.randint(-bound, bound)
        if math.gcd(c, d) != 1:
            continue
        g, a0, b0 = circles._ext_gcd(d, -c)
        t = rng.randint(-3, 3)
        out.append(UnimodularMatrix(a0 + t * c, b0 + t * d, c, d))
    return out


def _verify_field(fld: Discriminant, max_two_n: int, report: list[str]) -> str | None:
    """Run every identity check for one field; return a failure tag or None."""
    rng = random.Random(20260808 + fld.q)
    q = fld.q

    mats = _random_matrices(rng, 400, 60)
    for g in mats:
        two_n = halfplane.arithmetic_radius(fld, g)
        ch = halfplane.cosh_distance(fld.z, halfplane.apply_mobius(g, fld.z))
        if abs(ch - two_n / q) > 1e-6 * max(1.0, two_n / q):
            return f"radius-vs-cosh q={q} gamma={g.entries()}"
        h, Y = halfplane.integer_coords(fld, g)
        if q * h * h + Y * Y != two_n * two_n - q * q:
            return f"coordinate-norm-identity q={q} gamma={g.entries()}"
        w = halfplane.disc_map(fld, halfplane.apply_mobius(g, fld.z))
        n_plus = (two_n + q) // 2
        if abs(n_plus * w - complex(h * math.sqrt(q) / 2, Y / 2)) > 1e-6 * n_plus:
            return f"disc-map-image q={q} gamma={g.entries()}"
        r, u, s, t = halfplane.split_coordinates(fld, g)
        a1 = quadfield.AlgebraicInt(u, r, fld)
        a2 = quadfield.AlgebraicInt(t, s, fld)
        if a1.norm() != n_plus or a2.norm() != (two_n - q) // 2:
            return f"split-norms q={q} gamma={g.entries()}"
        if not halfplane.congruence_holds(fld, r, u, s, t):
            return f"congruence-of-matrix q={q} gamma={g.entries()}"
        if halfplane.coords_from_split(fld, r, u, s, t) != (h, Y):
            return f"split-product-identity q={q} gamma={g.entries()}"
        if halfplane.matrix_from_split(fld, r, u, s, t) != g:
            return f"split-roundtrip q={q} gamma={g.entries()}"
    report.append(f"q={q}: distance/coordinate/product identities + roundtrip on {len(mats)} matrices ok")

    for _ in range(2000):
        v = tuple(rng.randint(-50, 50) for _ in range(4))
        if halfplane.congruence_holds(fld, *v) != halfplane.congruence_holds_full(fld, *v):
            return f"congruence-reduction q={q} v={v}"
    report.append(f"q={q}: reduced congruence system matches 4x4 form ok")

    if max_two_n < q:
        report.append(f"q={q}: no radii below two_n={max_two_n}; geometry checks only")
        return None
    oracle = circles.brute_force_by_radius(fld, max_two_n)
    radii = circles.radii_up_to(fld, max_two_n / 2)
    seen_two_n = {r.two_n for r in radii}
    for tn, ms in oracle.items():
        if tn > q and tn not in seen_two_n and ms:
            return f"radius-set q={q} two_n={tn} missing from radii_up_to"
    for radius in radii:
        pairs = circles.enumerate_pairs(radius)
        g4 = radius.c4 * quadfield.r_count(fld, radius.n_minus) \
            * quadfield.r_count(fld, radius.n_plus)
        if g4 % 4 or len(pairs) != g4 // 4:
            return f"pair-count-formula q={q} two_n={radius.two_n}"
        mats2 = circles.pairs_to_matrices(radius, pairs)
        if mats2 != oracle.get(radius.two_n, []):
            return f"oracle-equivalence q={q} two_n={radius.two_n}"
        try:
            pts = circles.lattice_points(radius)
        except AssertionError:
            return f"point-set-equality q={q} two_n={radius.two_n}"
        if len(pts) != quadfield.r_star(fld, radius.norm_product):
            return f"point-count-vs-restricted q={q} two_n={radius.two_n}"
    report.append(f"q={q}: pair/matrix/point correspondences on {len(radii)} radii up to two_n={max_two_n} ok")

    for M in range(1, min(max_two_n * 4, 4000)):
        if quadfield.b_indicator(fld, M):
            quadfield.r_star(fld, M)   # self-asserts the closed form
    report.append(f"q={q}: restricted count closed form ok")

    norms = [M for M in range(1, 200) if quadfield.b_indicator(fld, M)]
    for _ in range(60):
        m1, m2 = rng.choice(norms), rng.choice(norms)
        if math.gcd(m1, m2) != 1:
            continue
        for k in range(1, 9):
            lhs = quadfield.v_k(fld, m1 * m2, k)
            rhs = quadfield.v_k(fld, m1, k) * quadfield.v_k(fld, m2, k)
            if abs(lhs - rhs) > 1e-9:
                return f"vk-multiplicativity q={q} M1={m1} M2={m2} k={k}"
    p0 = fld.ramified_prime
    for k in range(1, 9):
        vals = {round(quadfield.v_k(fld, p0 ** a, k), 12) for a in (1, 2, 3)}
        if len(vals) != 1:
            return f"vk-ramified-stability q={q} k={k}"
    report.append(f"q={q}: v_k multiplicativity + ramified stability ok")

    for radius in radii[:min(len(radii), 40)]:
        rep = equidist.discrepancy_report(radius)
        if rep.discrepancy > rep.et_bound + 1e-12:
            return f"erdos-turan q={q} two_n={radius.two_n}"
        dm = equidist.matrix_angle_discrepancy(radius)
        if abs(dm - equidist.circle_discrepancy(sorted(circles.angles(radius)))) > 1e-9:
            return f"matrix-vs-point-discrepancy q={q} two_n={radius.two_n}"
    sharp = [r for r in radii if equidist.in_sharp_set(r)][:5]
    for radius in sharp:
        for k in range(1, 7):
            if not equidist.sharp_factorization_check(fld, radius, k):
                return f"sharp-factorization q={q} two_n={radius.two_n} k={k}"
    report.append(f"q={q}: discrepancy bounds + sharp factorization ok")
    return None


def cmd_verify(args) -> CommandResult:
    if args.max_two_n > 10 ** 4:
        print("verify: --max-two-n capped at 10^4", file=sys.stderr)
        return CommandResult(2, 0)
    report: list[str] = []
    for fld in _selected_fields(args.q):
        fail = _verify_field(fld, args.max_two_n, report)
        if fail is not None:
            text = "\n".join(report + [f"FAIL {fail}"]) + "\n"
            _emit(text, args.out)
            return CommandResult(1, len(report))
    text = "\n".join(report + ["all identities verified"]) + "\n"
    _emit(text, args.out)
    return CommandResult(0, len(report))


# ---------------------------------------------------------------------------
# circle: dump one circle

def cmd_circle(args) -> CommandResult:
    fld = field(int(args.q))
    notes = []
    rows = []
    bounds = []
    for two_n in args.two_n:
        if (two_n - fld.q) % 2:
            print(f"circle: two_n={two_n} has wrong parity for q={fld.q}",
                  file=sys.stderr)
            return CommandResult(2, 0)
        if two_n <= fld.q:
            notes.append(f"two_n={two_n} at or below the centre: empty circle")
            continue
        radius = Radius(fld, two_n)
        if not (quadfield.b_indicator(fld, radius.n_plus)
                and quadfield.b_indicator(fld, radius.n_minus)):
            notes.append(f"two_n={two_n} is not a realized radius: empty circle")
            continue
        pairs = circles.enumerate_pairs(radius)
        pts = circles.lattice_points(radius)
        by_hy = {}
        for p in pairs:
            m = halfplane.matrix_from_split(fld, *p.rust)
            hy = halfplane.coords_from_split(fld, *p.rust)
            by_hy.setdefault(hy, []).append((p, m))
        for pt in pts:
            for p, m in by_hy[(pt.h, pt.Y)]:
                a, b, c, d = m.entries()
                r, u, s, t = p.rust
                rows.append([two_n, pt.h, pt.Y, f"{pt.display_angle():.12f}",
                             a, b, c, d, r, u, s, t])
        if args.k is not None:
            rep = equidist.discrepancy_report(radius, K=args.k)
            bounds.append({"two_n": two_n, "K": args.k,
                           "discrepancy": rep.discrepancy,
                           "et_bound": rep.et_bound})
    header = ["two_n", "h", "Y", "angle", "a", "b", "c", "d", "r", "u", "s", "t"]
    if args.format == "json":
        extra = {"two_n": args.two_n, "notes": notes}
        if bounds:
            extra["discrepancy_bounds"] = bounds
        _emit(_json_doc("circle", fld.q,
                        [dict(zip(header, row)) for row in rows], extra), args.out)
    else:
        text = _csv("circle", header, rows)
        for note in notes:
            text += f"# note: {note}\n"
        for bd in bounds:
            text += (f"# discrepancy two_n={bd['two_n']} K={bd['K']}: "
                     f"{_cell(bd['discrepancy'])} <= et {_cell(bd['et_bound'])}\n")
        _emit(text, args.out)
    return CommandResult(0, len(rows))


# ---------------------------------------------------------------------------
# survey

def cmd_survey(args) -> CommandResult:
    if args.x > 10 ** 7:
        print("survey: --x capped at 10^7", file=sys.stderr)
        return CommandResult(2, 0)
    fld = field(int(args.q))
    rows, summary = equidist.survey(fld, args.x, threads=args.threads)
    header = ["two_n", "omega", "Omega", "in_B_flat", "log2_r_star",
              "point_count", "gamma_count", "discrepancy"]
    table = [[r.two_n, r.omega, r.Omega, r.in_B_flat, r.log2_r_star,
              r.point_count, r.gamma_count, r.discrepancy] for r in rows]
    meta = {
        "x": args.x, "count": summary.count,
        "count_logx_over_2x": summary.count_logx_over_2x,
        "omega_quantiles": list(summary.omega_quantiles),
        "log2_rstar_quantiles": list(summary.log2_rstar_quantiles),
        "omega_outlier_fraction": summary.omega_outlier_fraction,
        "frac_fast_eps01": summary.frac_fast_eps01,
        "frac_fast_eps02": summary.frac_fast_eps02,
        "degenerate": summary.degenerate,
    }
    if args.format == "json":
        _emit(_json_doc("survey", fld.q, [dict(zip(header, row)) for row in table], meta), args.out)
    else:
        text = _csv("survey", header, table)
        text += "".join(f"# {k}: {_cell(v)}\n" for k, v in meta.items())
        _emit(text, args.out)
    return CommandResult(0, len(table))


# ---------------------------------------------------------------------------
# count: hyperbolic circle problem

def cmd_count(args) -> CommandResult:
    if args.x > 10 ** 6:
        print("count: --x capped at 10^6", file=sys.stderr)
        return CommandResult(2, 0)
    fld = field(int(args.q))
    res = equidist.circle_problem_sum(fld, args.x)
    header = ["x", "sum", "convolution_part", "centre_term", "direct_count", "six_x"]
    row = [res.x, res.total, res.convolution_part, res.centre_term,
           res.direct_count if res.direct_count is not None else "",
           6 * res.x if fld.q == 3 else ""]
    if args.format == "json":
        _emit(_json_doc("count", fld.q, [dict(zip(header, row))]), args.out)
    else:
        _emit(_csv("count", header, [row]), args.out)
    return CommandResult(0, 1)


# ---------------------------------------------------------------------------
# bnumbers: shifted-pair curve

def cmd_bnumbers(args) -> CommandResult:
    if args.x > 10 ** 7:
        print("bnumbers: --x capped at 10^7", file=sys.stderr)
        return CommandResult(2, 0)
    fld = field(int(args.q))
    if args.s is not None or args.z is not None:
        return _bnumbers_sieve_table(args, fld)
    xs = []
    x = 10 ** 3
    while x <= args.x:
        xs.append(x)
        x *= 10
    if not xs or xs[-1] != args.x:
        xs.append(int(args.x))
    rows = []
    for xv in xs:
        b = bnumbers.shifted_count(fld, xv, args.h)
        rows.append([xv, args.h, b, b * math.log(xv) / xv])
    header = ["x", "h", "count", "count_logx_over_x"]
    if args.format == "json":
        _emit(_json_doc("bnumbers", fld.q, [dict(zip(header, r)) for r in rows]), args.out)
    else:
        _emit(_csv("bnumbers", header, rows), args.out)
    return CommandResult(0, len(rows))


def _bnumbers_sieve_table(args, fld: Discriminant) -> CommandResult:
    """Progression sieve view: --x is the index bound y; --s (or --z) sets
    the sifting cut z = y^(1/s) (or z directly)."""
    spec = bnumbers.build_progression(fld, args.h)
    y = args.x
    if args.z is not None:
        z = args.z
        if z <= 2:
            print("bnumbers: --z must exceed 2", file=sys.stderr)
            return CommandResult(2, 0)
        sifted = bnumbers.sifted_count(fld, spec, y, z)
        row = [y, z, sifted, bnumbers.b_star_count(fld, spec, y), "", ""]
    else:
        if args.s <= 1:
            print("bnumbers: --s must exceed 1", file=sys.stderr)
            return CommandResult(2, 0)
        dec = bnumbers.sifted_decomposition(fld, spec, y, args.s)
        z = y ** (1.0 / args.s)
        row = [y, z, dec.sifted, dec.all_split,
               dec.two_large_inert, dec.four_large_inert]
    header = ["y", "z", "sifted", "all_split", "two_large_inert", "four_large_inert"]
    meta = {"h": args.h, "h_normalized": spec.h_normalized,
            "n0": spec.n0, "n1": spec.n1, "sigma": spec.sigma}
    if args.format == "json":
        _emit(_json_doc("bnumbers-sieve", fld.q, [dict(zip(header, row))], meta), args.out)
    else:
        text = _csv("bnumbers-sieve", header, [row])
        text += "".join(f"# {k}: {v}\n" for k, v in meta.items())
        _emit(text, args.out)
    return CommandResult(0, 1)


# ---------------------------------------------------------------------------
# plot: SVG of half-plane circles and the unit-disc image

def _svg_header(w: int, h: int) -> str:
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">\n')


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def cmd_plot(args) -> CommandResult:
    fld = field(int(args.q))
    q = fld.q
    radii = []
    for tn in args.two_n:
        if (tn - q) % 2 or tn <= q:
            print(f"plot: invalid two_n={tn} for q={q}", file=sys.stderr)
            return CommandResult(2, 0)
        radii.append(Radius(fld, tn))
    # half-plane pane: 1000x500, x in [-5,5], y in [0,5], 100 px per unit
    HW, HH, SC = 1000, 500, 100.0
    # disc pane: 500x500, 200 px per unit, centred
    DW, DC, DS = 500, 250.0, 200.0
    parts = [_svg_header(HW + DW, max(HH, 500))]
    parts.append(f'<rect width="{HW + DW}" height="{max(HH, 500)}" fill="#ffffff"/>\n')
    parts.append(f'<line x1="0" y1="{HH - 1}" x2="{HW}" y2="{HH - 1}" '
                 f'stroke="#222222" stroke-width="1"/>\n')
    zq = fld.z
    parts.append(f'<circle cx="{_fmt(HW / 2 + zq.real * SC)}" cy="{_fmt(HH - zq.imag * SC)}" '
                 f'r="3" fill="#222222" class="centre-point"/>\n')
    lam = math.sqrt(q) / 2.0
    for i, radius in enumerate(radii):
        color = PALETTE[i % len(PALETTE)]
        ch = radius.two_n / q
        cy = lam * ch
        rad = lam * math.sqrt(max(0.0, ch * ch - 1.0))
        parts.append(f'<circle cx="{_fmt(HW / 2 + zq.real * SC)}" cy="{_fmt(HH - cy * SC)}" '
                     f'r="{_fmt(rad * SC)}" fill="none" stroke="{color}" '
                     f'stroke-width="1" class="geodesic-circle"/>\n')
        mats = circles.pairs_to_matrices(radius, circles.enumerate_pairs(radius))
        seen = set()
        for g in mats:
            w = halfplane.apply_mobius(g, zq)
            key = (round(w.real, 9), round(w.imag, 9))
            if key in seen:
                continue
            seen.add(key)
            px, py = HW / 2 + w.real * SC, HH - w.imag * SC
            if -10 <= px <= HW + 10 and -10 <= py <= HH + 10:
                parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.5" '
                             f'fill="{color}" class="halfplane-point"/>\n')
    # disc pane
    ox = HW
    parts.append(f'<circle cx="{_fmt(ox + DC)}" cy="{_fmt(DC)}" r="{_fmt(DS)}" '
                 f'fill="none" stroke="#222222" stroke-width="1"/>\n')
    parts.append(f'<circle cx="{_fmt(ox + DC)}" cy="{_fmt(DC)}" r="2" fill="#222222" '
                 f'class="centre-point"/>\n')
    for i, radius in enumerate(radii):
        color = PALETTE[i % len(PALETTE)]
        rim = math.sqrt((radius.two_n - q) / (radius.two_n + q))
        parts.append(f'<circle cx="{_fmt(ox + DC)}" cy="{_fmt(DC)}" r="{_fmt(rim * DS)}" '
                     f'fill="none" stroke="{color}" stroke-width="0.75" '
                     f'class="image-circle"/>\n')
        n_plus = radius.n_plus
        for pt in circles.lattice_points(radius):
            x, y = pt.xy()
            px = ox + DC + (x / n_plus) * DS
            py = DC - (y / n_plus) * DS
            parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="3" '
                         f'fill="{color}" class="disc-point"/>\n')
    parts.append("</svg>\n")
    _emit("".join(parts), args.out)
    return CommandResult(0, sum(1 for p in parts if "disc-point" in p))


# ---------------------------------------------------------------------------

def _parse_two_n_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heegner-circles",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    qchoices = [str(v) for v in CLASS_NUMBER_ONE_Q]

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--q", choices=qchoices + ["all"], default="all")
    p.add_argument("--max-two-n", type=int, default=200, dest="max_two_n")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("circle", help="dump points/matrices of circles")
    p.add_argument("--q", choices=qchoices, required=True)
    p.add_argument("--two-n", type=_parse_two_n_list, required=True, dest="two_n")
    p.add_argument("--k", type=int, default=None,
                   help="also report discrepancy and its harmonic bound at cutoff K")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_circle)

    p = sub.add_parser("survey", help="per-radius statistics up to a height")
    p.add_argument("--q", choices=qchoices, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="radius-parallel workers; output independent of it")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_survey)

    p = sub.add_parser("count", help="hyperbolic circle problem count")
    p.add_argument("--q", choices=qchoices, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("bnumbers", help="shifted norm-pair counting curve")
    p.add_argument("--q", choices=qchoices, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--z", type=float, default=None,
                   help="progression sieve view with this sifting cut")
    p.add_argument("--s", type=float, default=None,
                   help="progression sieve view with cut z = x^(1/s)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_bnumbers)

    p = sub.add_parser("plot", help="SVG of circles in half-plane and disc")
    p.add_argument("--q", choices=qchoices, required=True)
    p.add_argument("--two-n", type=_parse_two_n_list, required=True, dest="two_n")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_plot)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result: CommandResult = args.fn(args)
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
