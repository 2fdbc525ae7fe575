"""Command-line harness: sweep experiments, emit CSV/JSON reports.

Exit codes: 0 ok; 1 a checked inequality failed under --strict;
2 usage or numerical error.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import berry, cumulants, infinitesimal, models, partitions, transforms


# ---------------------------------------------------------------------------
# parsing helpers

def parse_complex(s):
    """Parse 'a+bi' (also 'bi', 'a') into a complex number."""
    return complex(str(s).strip().replace("i", "j").replace(" ", ""))


def parse_int_list(s):
    return [int(t) for t in str(s).split(",") if t.strip()]


def parse_float_list(s):
    return [float(t) for t in str(s).split(",") if t.strip()]


def load_measure(spec):
    """Measure from a JSON file path or inline JSON text."""
    try:
        data = json.loads(spec)
    except (json.JSONDecodeError, TypeError):
        with open(spec) as fh:
            data = json.load(fh)
    if data.get("kind") != "atomic":
        raise ValueError("only atomic measure JSON is accepted as input")
    return transforms.AtomicMeasure([(float(t), float(w))
                                     for t, w in data["atoms"]])


def dump_measure(mu, path=None, grid=None):
    if isinstance(mu, transforms.AtomicMeasure):
        data = {"kind": "atomic",
                "atoms": [[t, w] for t, w in mu.atoms]}
    else:
        if grid is None:
            grid = np.linspace(-8.0, 8.0, 401)
        data = {"kind": "sampled",
                "grid": [[float(t), float(mu.density(t, 0.05))]
                         for t in grid]}
    text = json.dumps(data, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return data


def load_profile(spec):
    try:
        data = json.loads(spec)
    except (json.JSONDecodeError, TypeError):
        with open(spec) as fh:
            data = json.load(fh)
    return models.VarianceProfile(data["sigma"], data["alpha"],
                                  data["alpha_tilde"])


class Report:
    """Collects rows, writes CSV (or JSON), tracks pass/fail flags."""

    def __init__(self, header):
        self.header = list(header)
        self.rows = []

    def add(self, *row):
        self.rows.append(list(row))

    @property
    def failures(self):
        if "pass" not in self.header:
            return 0
        i = self.header.index("pass")
        return sum(1 for r in self.rows if not r[i])

    def write(self, out, as_json=False):
        if as_json:
            out.write(json.dumps(
                [dict(zip(self.header, r)) for r in self.rows],
                indent=2, default=str) + "\n")
        else:
            w = csv.writer(out)
            w.writerow(self.header)
            w.writerows(self.rows)


# ---------------------------------------------------------------------------
# subcommands

def cmd_partitions(args, out):
    if args.n is None:
        raise ValueError("--n is required (flag or config file)")
    n = args.n
    fams = {"noncrossing": partitions.noncrossing_partitions,
            "interval": partitions.interval_partitions,
            "pairing": partitions.noncrossing_pairings}
    pis = fams[args.cls](n)
    if args.count:
        out.write(f"{len(pis)}\n")
        return Report(["count"])
    rep = Report(["partition", "tau_factorial"])
    for pi in pis:
        rep.add(json.dumps([list(b) for b in pi]),
                str(partitions.tau_factorial(pi)))
    rep.write(out, args.json)
    return rep


def _scalar_moment_family(ms):
    def fam(letters, args):
        v = ms[len(letters) - 1]  # ms[0] is the first moment
        for a in args:
            v = v * a
        return v
    return fam


def cmd_moments(args, out):
    ms = parse_float_list(args.moments)
    fam = _scalar_moment_family(ms)
    cf = cumulants.cumulants_from_moments(args.kind, fam, unit=1.0)
    rep = Report(["order", "moment", "cumulant"])
    for k in range(1, len(ms) + 1):
        c = cf(("x",) * k, (1.0,) * (k - 1))
        rep.add(k, ms[k - 1], float(np.real(c)))
    rep.write(out, args.json)
    return rep


def cmd_convolve(args, out):
    mus = [load_measure(m) for m in args.measures]
    conv = (transforms.boolean_convolve if args.kind == "boolean"
            else transforms.monotone_convolve)
    mu = mus[0]
    for nu in mus[1:]:
        mu = conv(mu, nu)
    if args.power > 1:
        it = (transforms.iterate_boolean if args.kind == "boolean"
              else transforms.iterate_monotone)
        mu = it(mu, args.power)
    if args.out_measure:
        dump_measure(mu, args.out_measure)
    rep = Report(["t", "density"])
    for t in np.linspace(args.grid_lo, args.grid_hi, args.grid_points):
        rep.add(float(t), float(mu.density(t, args.eps)))
    rep.write(out, args.json)
    return rep


def cmd_models(args, out):
    locs = [models.jacobi_from_atoms(load_measure(m).atoms)
            for m in args.measures]
    if args.type == "eta-circular":
        op = models.eta_circular_local(args.alpha, args.alpha_tilde)
        op = op + op.conj().T
        model = models.VacuumModel(op.shape[0])
        law = models.spectral_distribution(op, [(1.0, model.vacuum)])
    else:
        builder = (models.boolean_star_family if args.type == "star"
                   else models.monotone_product_family)
        model, ops = builder(locs)
        law = models.spectral_distribution(sum(ops), [(1.0, model.vacuum)])
    rep = Report(["location", "weight"])
    for t, w in law.atoms:
        rep.add(float(t), float(w))
    rep.write(out, args.json)
    return rep


def cmd_wigner(args, out):
    if args.profile:
        profile = load_profile(args.profile)
    elif args.distance_weighted:
        profile = models.VarianceProfile.distance_weighted(args.n)
    else:
        profile = models.VarianceProfile.uniform(
            args.n, args.sigma, args.alpha, args.alpha_tilde)
    law = models.profile_spectral_law(profile)
    rep = Report(["location", "weight"])
    for t, w in law.atoms:
        rep.add(float(t), float(w))
    rep.write(out, args.json)
    rng = np.random.default_rng(args.seed)
    gaps = Report(["z_re", "z_im", "lhs", "rhs", "pass"])
    for z in args.z:
        lhs, rhs = berry.wigner_gap(
            profile, z,
            entry_factory=lambda i, j, a, at: models.perturbed_circular_local(
                a, at, 0.3 * rng.standard_normal()))
        gaps.add(z.real, z.imag, lhs, rhs, bool(lhs <= rhs))
    gaps.write(out, args.json)
    rep.rows.extend(gaps.rows)
    rep.header = gaps.header
    return gaps


def _summand_measure(args):
    if args.summand == "bernoulli":
        return transforms.bernoulli_measure(args.variance)
    return load_measure(args.summand)


def cmd_clt(args, out):
    mu = _summand_measure(args)
    rep = Report(["kind", "n", "z_re", "z_im", "lhs", "rhs", "pass"])
    for n in args.n:
        for z in args.z:
            lhs, rhs = berry.clt_gap(args.kind, mu, n, z)
            rep.add(args.kind, n, z.real, z.imag, lhs, rhs,
                    bool(lhs <= rhs))
    rep.write(out, args.json)
    return rep


def cmd_berry(args, out):
    rng = np.random.default_rng(args.seed)
    rep = Report(["check", "n", "z_re", "z_im", "lhs", "rhs", "pass"])
    # exact Lindeberg telescoping on a random star model
    spans = rng.uniform(0.3, 1.0, size=args.pairs)
    # centered two-atom summands with variance s², matched Bernoulli targets
    locs = [models.jacobi_from_atoms(
        [(float(s) * np.sqrt(7.0 / 3.0), 0.3),
         (-float(s) * np.sqrt(3.0 / 7.0), 0.7)])
        for s in spans]
    model, xs = models.boolean_star_family(locs)
    _, ys = models.boolean_star_family(
        [models.bernoulli_local(float(s) ** 2) for s in spans])
    z = args.z[0]
    _, resid = berry.lindeberg_terms(model, xs, ys, z)
    rep.add("lindeberg-telescope", args.pairs, z.real, z.imag, resid,
            1e-12, bool(resid <= 1e-12))
    mu = _summand_measure(args)
    for kind in ("boolean", "monotone"):
        for n in args.n:
            for zz in args.z:
                lhs, rhs = berry.clt_gap(kind, mu, n, zz)
                rep.add(f"clt-{kind}", n, zz.real, zz.imag, lhs, rhs,
                        bool(lhs <= rhs))
    rep.write(out, args.json)
    return rep


def cmd_inf(args, out):
    rng = np.random.default_rng(args.seed)
    rep = Report(["check", "kind", "n", "z_re", "z_im", "lhs", "rhs",
                  "pass"])

    def rand_pair(scale, k=3):
        while True:
            a = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
            x = scale * (a + a.conj().T) / 2
            x -= np.eye(k) * x[0, 0]
            b = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
            xp = scale * (b + b.conj().T) / 2
            xp -= np.eye(k) * xp[0, 0]
            if abs(models.VacuumModel(k).state(x @ x)) > 0.05 * scale ** 2:
                return x, xp

    # word-rule vs joint-lift-model equivalence
    for kind in ("boolean", "monotone"):
        pairs = {0: rand_pair(0.6), 1: rand_pair(0.6)}
        model, lifted = infinitesimal.joint_lift_model(
            kind, [pairs[0], pairs[1]])
        worst = 0.0
        for letters in [(0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 1)]:
            bs = tuple(rng.normal() + 1j * rng.normal()
                       for _ in range(len(letters) - 1))
            E, Ep = infinitesimal.eprime_word(kind, pairs, letters, bs)
            d = infinitesimal.lift_word_value(model, lifted, letters, bs)
            worst = max(worst, abs(E - d.re), abs(Ep - d.de))
        rep.add("lift-equivalence", kind, 2, 0.0, 0.0, worst, 1e-10,
                bool(worst <= 1e-10))
    # first-order distance bound sweeps
    for kind in ("boolean", "monotone", "free"):
        z = args.z[0] if kind != "free" else 2 * args.z[0]
        for n in args.n:
            xs = [rand_pair(0.4 / np.sqrt(n)) for _ in range(n)]
            ys = infinitesimal.matched_target_family(xs)
            lhs, rhs = infinitesimal.inf_bound_gap(kind, xs, ys, z)
            rep.add("inf-bound", kind, n, z.real, z.imag, lhs, rhs,
                    bool(lhs <= rhs))
    # variance comparison at first order
    for _ in range(5):
        e0, e1 = rng.uniform(0.2, 2.0, 2)
        p0, p1 = rng.uniform(-1.0, 1.0, 2)
        z = rng.uniform(-1, 1) + 1j * rng.uniform(0.8, 2.5)
        lhs, rhs = infinitesimal.variance_comparison_inf(e0, p0, e1, p1, z)
        rep.add("inf-comparison", "boolean", 1, z.real, z.imag, lhs, rhs,
                bool(lhs <= rhs))
    rep.write(out, args.json)
    return rep


def cmd_fourth_moment(args, out):
    mu = _summand_measure(args)
    rep = Report(["n", "z_re", "z_im", "lhs", "rhs", "h4", "pass"])
    for n in args.n:
        for z in args.z:
            lhs, rhs, h4 = berry.fourth_moment_gap(mu, n, z)
            rep.add(n, z.real, z.imag, lhs, rhs, float(h4),
                    bool(lhs <= rhs))
    rep.write(out, args.json)
    return rep


# ---------------------------------------------------------------------------
# wiring

def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true",
                   help="emit JSON instead of CSV")
    p.add_argument("--strict", action="store_true",
                   help="exit 1 if any checked inequality fails")
    p.add_argument("--out", default=None, help="write report to a file")


def build_parser():
    p = argparse.ArgumentParser(
        prog="ncprob",
        description="noncommutative probability experiment harness")
    p.add_argument("--config", default=None,
                   help="JSON file of defaults; explicit flags win")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("partitions", help="enumerate partition classes")
    q.add_argument("--n", type=int, default=None)
    q.add_argument("--class", dest="cls", default="noncrossing",
                   choices=["noncrossing", "interval", "pairing"])
    q.add_argument("--count", action="store_true")
    _common(q)
    q.set_defaults(func=cmd_partitions)

    q = sub.add_parser("moments", help="moment-to-cumulant tables")
    q.add_argument("--kind", required=True,
                   choices=["free", "boolean", "monotone"])
    q.add_argument("--moments", required=True,
                   help="comma-separated m1,m2,...")
    _common(q)
    q.set_defaults(func=cmd_moments)

    q = sub.add_parser("convolve", help="boolean/monotone convolution chains")
    q.add_argument("--kind", required=True, choices=["boolean", "monotone"])
    q.add_argument("--measures", nargs="+", required=True,
                   help="measure JSON files or inline JSON")
    q.add_argument("--power", type=int, default=1,
                   help="self-convolve the result this many times")
    q.add_argument("--out-measure", default=None)
    q.add_argument("--grid-lo", type=float, default=-4.0)
    q.add_argument("--grid-hi", type=float, default=4.0)
    q.add_argument("--grid-points", type=int, default=161)
    q.add_argument("--eps", type=float, default=0.05,
                   help="resolvent height for density sampling")
    _common(q)
    q.set_defaults(func=cmd_convolve)

    q = sub.add_parser("models", help="operator models and spectra")
    q.add_argument("--type", required=True,
                   choices=["star", "monotone", "eta-circular"])
    q.add_argument("--measures", nargs="*", default=[])
    q.add_argument("--alpha", type=float, default=1.0)
    q.add_argument("--alpha-tilde", type=float, default=0.5)
    _common(q)
    q.set_defaults(func=cmd_models)

    q = sub.add_parser("wigner", help="variance-profile matrix models")
    q.add_argument("--profile", default=None)
    q.add_argument("--n", type=int, default=8)
    q.add_argument("--sigma", type=float, default=0.0)
    q.add_argument("--alpha", type=float, default=1.0)
    q.add_argument("--alpha-tilde", type=float, default=0.5)
    q.add_argument("--distance-weighted", action="store_true")
    q.add_argument("--z", type=parse_complex, nargs="+",
                   default=[2j])
    _common(q)
    q.set_defaults(func=cmd_wigner)

    def clt_like(name, helptext):
        q = sub.add_parser(name, help=helptext)
        q.add_argument("--summand", default="bernoulli",
                       help="'bernoulli' or a measure JSON file/text")
        q.add_argument("--variance", type=float, default=1.0)
        q.add_argument("--n", type=parse_int_list, default=[4, 16])
        q.add_argument("--z", type=parse_complex, nargs="+", default=[2j])
        _common(q)
        return q

    q = clt_like("clt", "central limit bound sweeps")
    q.add_argument("--kind", required=True, choices=["boolean", "monotone"])
    q.set_defaults(func=cmd_clt)

    q = clt_like("berry", "Lindeberg identity plus bound sweeps")
    q.add_argument("--pairs", type=int, default=4)
    q.set_defaults(func=cmd_berry)

    q = sub.add_parser("inf", help="first-order (infinitesimal) checks")
    q.add_argument("--n", type=parse_int_list, default=[2, 4])
    q.add_argument("--z", type=parse_complex, nargs="+", default=[2j])
    _common(q)
    q.set_defaults(func=cmd_inf)

    q = clt_like("fourth-moment", "fourth-moment gap sweep")
    q.set_defaults(func=cmd_fourth_moment)
    return p


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            config = json.load(fh)
        # config supplies values for flags not given explicitly
        for key, val in config.items():
            flag = "--" + key.replace("_", "-")
            if flag not in argv and hasattr(args, key):
                setattr(args, key, val)
    try:
        if args.out:
            with open(args.out, "w", newline="") as fh:
                rep = args.func(args, fh)
        else:
            rep = args.func(args, sys.stdout)
    except (ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    if args.strict and rep.failures:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
