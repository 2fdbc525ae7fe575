"""Mixed moments of words in independent subalgebras.

A word is an alternating sequence  s_0 a_1 s_1 a_2 ... a_n s_n  of
B-valued separators s_j and algebra elements a_j.  Each element is a
linear combination of monomials b_0 x b_1 x ... x b_k in the algebra's
generator x (k >= 1; k = 0 monomials are pure-B constants and only arise
internally).  Per-algebra expectations are supplied as families
``fam(args)`` with E[x b_1 x ... b_{k-1} x] = fam((b_1, ..., b_{k-1})).

The three evaluation rules:

* Boolean: consolidate adjacent same-algebra elements, then the
  expectation factorizes across the alternation.
* Monotone (algebras totally ordered by their index): repeatedly replace
  an element whose index strictly exceeds both neighbours' by its
  expectation.
* Free: split each element into centered part plus mean; the term with
  every element centered vanishes (alternating centered words have zero
  expectation), the others shorten the word and recurse.

Running the same algorithms with ``Dual`` B-values, where each algebra's
family carries its first-order part in the eps-slot, yields the
first-order expectation of the word in the eps-part of the result: this
is the upper-triangular-lift picture of infinitesimal independence.
"""

from .algebra import mdot, mdot_chain, unit_like, zero_like

# an element is (algebra_index, [(coeff, (b0, ..., bk)), ...])


def generator_element(unit):
    """The monomial 1*x*1 as a one-term element body."""
    return [(1, (unit, unit))]


def element_power(body, p, unit):
    out = body
    for _ in range(p - 1):
        out = _mul_bodies(out, unit, body)
    return out


def _mul_bodies(body1, sep, body2):
    """Product (element1 * sep * element2) within one algebra."""
    out = []
    for c1, m1 in body1:
        for c2, m2 in body2:
            joined = m1[:-1] + (mdot_chain(m1[-1], sep, m2[0]),) + m2[1:]
            out.append((c1 * c2, joined))
    return out


def phi(fam, body):
    """Expectation of an element body under its algebra's family."""
    total = None
    for coeff, m in body:
        if len(m) == 1:
            v = m[0]
        else:
            v = mdot(mdot(m[0], fam(tuple(m[1:-1]))), m[-1])
        if coeff != 1:
            v = coeff * v
        total = v if total is None else total + v
    return total


def mixed_moment(kind, families, letters, args, unit=None):
    """E[x_{l1} b_1 x_{l2} ... x_{ln}] for generators of independent algebras.

    ``letters``: algebra indices (comparable for the monotone order);
    ``families``: dict index -> moment family of that algebra's generator;
    ``args``: the n-1 interleaved B-values.
    """
    if unit is None:
        unit = unit_like(args[0]) if args else 1
    seps = [unit] + list(args) + [unit]
    elems = [(l, generator_element(unit)) for l in letters]
    return word_moment(kind, families, seps, elems, unit)


def word_moment(kind, families, seps, elems, unit):
    seps, elems = _merge(seps, elems)
    if kind == "boolean":
        vals = [phi(families[alg], body) for alg, body in elems]
        out = seps[0]
        for v, s in zip(vals, seps[1:]):
            out = mdot(mdot(out, v), s)
        return out
    if kind == "monotone":
        return _monotone_moment(families, seps, elems, unit)
    if kind == "free":
        return _free_moment(families, seps, elems, unit)
    raise ValueError(f"unknown kind {kind!r}")


def _merge(seps, elems):
    """Consolidate adjacent same-algebra elements into single elements."""
    out_s = [seps[0]]
    out_e = []
    for s_after, el in zip(seps[1:], elems):
        if out_e and out_e[-1][0] == el[0]:
            alg, pbody = out_e.pop()
            sep_between = out_s.pop()
            out_e.append((alg, _mul_bodies(pbody, sep_between, el[1])))
        else:
            out_e.append(el)
        out_s.append(s_after)
    return out_s, out_e


def _collapse(seps, elems, j, value):
    """Replace element j by the B-value ``value``, folding into separators."""
    new_seps = list(seps)
    new_elems = list(elems)
    folded = mdot_chain(seps[j], value, seps[j + 1])
    del new_elems[j]
    new_seps[j:j + 2] = [folded]
    return new_seps, new_elems


def _monotone_moment(families, seps, elems, unit):
    while elems:
        if len(elems) == 1:
            alg, body = elems[0]
            return mdot_chain(seps[0], phi(families[alg], body), seps[1])
        # an element strictly above both neighbours always exists after
        # merging (take any element of maximal index)
        idx = max(range(len(elems)), key=lambda j: elems[j][0])
        alg, body = elems[idx]
        seps, elems = _collapse(seps, elems, idx, phi(families[alg], body))
        seps, elems = _merge(seps, elems)
    return mdot_chain(*seps)


def _free_moment(families, seps, elems, unit):
    if not elems:
        return mdot_chain(*seps)
    if len(elems) == 1:
        alg, body = elems[0]
        return mdot_chain(seps[0], phi(families[alg], body), seps[1])
    means = [phi(families[alg], body) for alg, body in elems]
    centered = []
    for (alg, body), mu in zip(elems, means):
        centered.append((alg, list(body) + [(-1, (mu,))]))
    total = None
    # expand over which elements are replaced by their mean; the
    # all-centered alternating term has zero expectation and is dropped
    n = len(elems)
    for mask in range(1, 1 << n):
        new_seps, new_elems = list(seps), []
        for j in range(n):
            if mask >> j & 1:
                new_elems.append(("const", means[j]))
            else:
                new_elems.append(centered[j])
        # fold constant slots into separators right-to-left
        for j in reversed(range(n)):
            if new_elems[j][0] == "const":
                new_seps, new_elems = _collapse(new_seps, new_elems, j,
                                                new_elems[j][1])
        new_seps, new_elems = _merge(new_seps, new_elems)
        term = _free_moment(families, new_seps, new_elems, unit)
        total = term if total is None else total + term
    return total
