"""Permutation-group kernel: BSGS, orbits, blocks, coset actions, flags.

Permutations are numpy int32 arrays of images; composition is left-to-right
(apply g then h), matching the right actions used throughout the geometry
layers: compose(g, h)[x] = h[g[x]].

Schreier-Sims runs deterministically (full Schreier-generator processing) up
to DETERMINISTIC_DEGREE.  Above that a randomized pass (product replacement
plus sifting) is used and the chain is accepted only once the computed order
reaches a caller-supplied expected order; the computed order can never exceed
the true order, so matching it certifies completeness.  Every large group in
the catalogue has an arithmetically known order or one derived from
orbit-stabilizer counting.
"""

from __future__ import annotations

import random

import numpy as np

DETERMINISTIC_DEGREE = 4000
DEFAULT_SEED = 0x52334C53  # "R3LS"


def identity(degree: int) -> np.ndarray:
    return np.arange(degree, dtype=np.int32)


def compose(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Apply g, then h."""
    return h[g]


def inverse(g: np.ndarray) -> np.ndarray:
    inv = np.empty_like(g)
    inv[g] = np.arange(len(g), dtype=np.int32)
    return inv


def is_identity(g: np.ndarray) -> bool:
    return bool((g == np.arange(len(g), dtype=np.int32)).all())


def perm_from_images(images) -> np.ndarray:
    g = np.asarray(images, dtype=np.int32)
    if sorted(g.tolist()) != list(range(len(g))):
        raise ValueError("not a permutation")
    return g


def perm_power(g: np.ndarray, e: int) -> np.ndarray:
    out = identity(len(g))
    base = g
    while e:
        if e & 1:
            out = compose(out, base)
        base = compose(base, base)
        e >>= 1
    return out


def perm_order(g: np.ndarray) -> int:
    seen = np.zeros(len(g), dtype=bool)
    order = 1
    for i in range(len(g)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(g[j])
            length += 1
        order = order * length // _gcd(order, length)
    return order


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class _Level:
    """One level of a stabilizer chain: base point, level generators (all
    strong generators fixing the base prefix), Schreier tree."""

    __slots__ = ("point", "gens", "inv_gens", "orbit", "sv")

    def __init__(self, degree: int, point: int):
        self.point = point
        self.gens: list[np.ndarray] = []
        self.inv_gens: list[np.ndarray] = []
        self.orbit: list[int] = [point]
        self.sv = np.full(degree, -1, dtype=np.int32)
        self.sv[point] = -2  # root marker

    def add_gen(self, g: np.ndarray):
        self.gens.append(g)
        self.inv_gens.append(inverse(g))
        self.extend_orbit()

    def extend_orbit(self):
        sv = self.sv
        frontier = np.fromiter(self.orbit, dtype=np.int32)
        while frontier.size:
            parts = []
            for k, g in enumerate(self.gens):
                img = g[frontier]
                fresh = img[sv[img] == -1]
                if fresh.size:
                    fresh = np.unique(fresh)
                    fresh = fresh[sv[fresh] == -1]
                    sv[fresh] = k
                    self.orbit.extend(int(x) for x in fresh)
                    parts.append(fresh)
            frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int32)

    def rep_to(self, point: int, degree: int) -> np.ndarray:
        """A word u in the level generators with base^u = point."""
        u = identity(degree)
        x = point
        while x != self.point:
            k = int(self.sv[x])
            u = compose(self.gens[k], u)
            x = int(self.inv_gens[k][x])
        return u

    def trace_back(self, g: np.ndarray):
        """g * u^{-1} for the transversal rep u with base^u = base^g, i.e. an
        element fixing the base point; None if base^g is outside the orbit."""
        x = int(g[self.point])
        if self.sv[x] == -1:
            return None
        while x != self.point:
            k = int(self.sv[x])
            g = compose(g, self.inv_gens[k])
            x = int(g[self.point])
        return g


class PermGroup:
    """Permutation group of fixed degree given by generators.

    The base/strong-generating structure is built lazily on first use of
    order, membership, stabilizers or random elements.
    """

    def __init__(self, degree: int, gens, *, expected_order: int | None = None,
                 base_hint=None, seed: int = DEFAULT_SEED, name: str = ""):
        self.degree = degree
        self.gens = []
        for g in gens:
            arr = g.astype(np.int32) if isinstance(g, np.ndarray) else perm_from_images(g)
            if len(arr) != degree:
                raise ValueError("generator degree mismatch")
            if not is_identity(arr):
                self.gens.append(arr)
        self.expected_order = expected_order
        self.base_hint = list(base_hint) if base_hint else []
        self.seed = seed
        self.name = name
        self._levels: list[_Level] | None = None
        self._order: int | None = None

    def __repr__(self):
        label = self.name or f"<{len(self.gens)} gens>"
        return f"PermGroup({label}, deg={self.degree})"

    # -- chain construction ---------------------------------------------------

    def _chain(self) -> list[_Level]:
        if self._levels is None:
            self._build_bsgs()
        return self._levels

    def _chain_order(self) -> int:
        out = 1
        for lv in self._levels:
            out *= len(lv.orbit)
        return out

    def _first_moved(self, g: np.ndarray) -> int:
        used = {lv.point for lv in self._levels}
        for b in self.base_hint:
            if b not in used and g[b] != b:
                return b
        diff = np.nonzero(g != np.arange(self.degree, dtype=np.int32))[0]
        for b in diff:
            if int(b) not in used:
                return int(b)
        raise AssertionError("no unused moved point for base extension")

    def _sift(self, g: np.ndarray, start: int = 0):
        """Returns (residue, level); residue None means member."""
        for i in range(start, len(self._levels)):
            lv = self._levels[i]
            if int(g[lv.point]) == lv.point:
                continue
            g2 = lv.trace_back(g)
            if g2 is None:
                return g, i
            g = g2
        if is_identity(g):
            return None, len(self._levels)
        return g, len(self._levels)

    def _insert_strong_gen(self, g: np.ndarray) -> int:
        """Add g as a strong generator; returns the deepest level it joins."""
        m = 0
        while m < len(self._levels) and g[self._levels[m].point] == self._levels[m].point:
            m += 1
        if m == len(self._levels):
            self._levels.append(_Level(self.degree, self._first_moved(g)))
        for j in range(m + 1):
            self._levels[j].add_gen(g)
        return m

    def _build_bsgs(self):
        self._levels = []
        if not self.gens:
            self._order = 1
            return
        first = None
        for b in self.base_hint:
            if any(g[b] != b for g in self.gens):
                first = b
                break
        if first is None:
            g0 = self.gens[0]
            first = self._first_moved_any()
        self._levels.append(_Level(self.degree, first))
        for g in self.gens:
            # every input generator is a strong generator for its prefix
            m = 0
            while m < len(self._levels) and g[self._levels[m].point] == self._levels[m].point:
                m += 1
            if m == len(self._levels):
                self._levels.append(_Level(self.degree, self._first_moved(g)))
            for j in range(m + 1):
                self._levels[j].add_gen(g)
        if self.expected_order is not None and self.degree >= 256:
            self._randomized_schreier_sims()
            self._order = self._chain_order()
        elif self.degree <= DETERMINISTIC_DEGREE:
            self._deterministic_schreier_sims()
            self._order = self._chain_order()
            if self.expected_order is not None and self._order != self.expected_order:
                raise AssertionError(
                    f"{self!r}: order {self._order} != expected {self.expected_order}")
        else:
            raise ValueError(
                f"{self!r}: degree {self.degree} needs expected_order for the "
                f"randomized Schreier-Sims certificate")

    def _first_moved_any(self) -> int:
        for g in self.gens:
            diff = np.nonzero(g != np.arange(self.degree, dtype=np.int32))[0]
            if diff.size:
                return int(diff[0])
        raise AssertionError("no non-identity generator")

    def _deterministic_schreier_sims(self):
        i = len(self._levels) - 1
        while i >= 0:
            lv = self._levels[i]
            inserted_at = None
            xi = 0
            while xi < len(lv.orbit):
                x = lv.orbit[xi]
                u = lv.rep_to(x, self.degree)
                si = 0
                while si < len(lv.gens):
                    s = lv.gens[si]
                    y = int(s[x])
                    v = lv.rep_to(y, self.degree)
                    schreier = compose(compose(u, s), inverse(v))
                    if not is_identity(schreier):
                        residue, _lvl = self._sift(schreier, i + 1)
                        if residue is not None:
                            m = self._insert_strong_gen(residue)
                            inserted_at = m
                            break
                    si += 1
                if inserted_at is not None:
                    break
                xi += 1
            if inserted_at is not None:
                i = inserted_at
            else:
                i -= 1

    def _randomized_schreier_sims(self):
        rng = random.Random(self.seed)
        shaker = _Shaker(self.gens, rng)
        target = self.expected_order
        attempts = 0
        max_attempts = 20000
        while attempts < max_attempts:
            attempts += 1
            order = self._chain_order()
            if order == target:
                return
            if order > target:
                raise AssertionError(
                    f"{self!r}: computed order {order} exceeds expected {target}")
            g = shaker.element()
            residue, _ = self._sift(g, 0)
            if residue is not None:
                self._insert_strong_gen(residue)
        raise AssertionError(
            f"{self!r}: randomized BSGS stalled at order {self._chain_order()}, "
            f"expected {target}")

    # -- public queries ---------------------------------------------------------

    @property
    def order(self) -> int:
        if self._order is None:
            self._build_bsgs()
        return self._order

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self._chain()]

    def contains(self, g) -> bool:
        g = g if isinstance(g, np.ndarray) else perm_from_images(g)
        if len(g) != self.degree:
            return False
        self.order
        if not self._levels:
            return is_identity(g)
        residue, _ = self._sift(g.astype(np.int32), 0)
        return residue is None

    def orbit(self, x: int) -> list[int]:
        seen = np.zeros(self.degree, dtype=bool)
        seen[x] = True
        out = [x]
        frontier = np.array([x], dtype=np.int32)
        while frontier.size:
            parts = []
            for g in self.gens:
                img = g[frontier]
                fresh = np.unique(img[~seen[img]])
                if fresh.size:
                    seen[fresh] = True
                    out.extend(int(v) for v in fresh)
                    parts.append(fresh)
            frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int32)
        return out

    def orbits(self) -> list[list[int]]:
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for x in range(self.degree):
            if not seen[x]:
                orb = self.orbit(x)
                seen[orb] = True
                out.append(sorted(orb))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def random_element(self, rng: random.Random) -> np.ndarray:
        if not self.gens:
            return identity(self.degree)
        self.order
        g = identity(self.degree)
        for lv in self._levels:
            x = rng.choice(lv.orbit)
            g = compose(lv.rep_to(x, self.degree), g)
        return g

    def stabilizer(self, x: int) -> "PermGroup":
        """The point stabilizer G_x, with order |G| / |x^G|."""
        orb = self.orbit(x)
        sub_order = self.order // len(orb)
        if len(orb) == 1:
            return PermGroup(self.degree, self.gens, expected_order=sub_order,
                             seed=self.seed, name=f"{self.name}_{x}")
        if self._levels and self._levels[0].point == x:
            chain = self._levels
        else:
            rebased = PermGroup(self.degree, self.gens, expected_order=self.order,
                                base_hint=[x] + self.base_hint, seed=self.seed,
                                name=f"{self.name}|rebase{x}")
            rebased.order
            chain = rebased._levels
        gens = [g for g in chain[0].gens if g[x] == x]
        for lv in chain[1:]:
            for g in lv.gens:
                gens.append(g)
        # dedupe by id/bytes
        uniq = {}
        for g in gens:
            uniq[g.tobytes()] = g
        return PermGroup(self.degree, list(uniq.values()), expected_order=sub_order,
                         base_hint=[lv.point for lv in chain[1:]],
                         seed=self.seed, name=f"{self.name}_{x}")

    def reduced_gens(self, rng: random.Random | None = None, tries: int = 30):
        """A small generating set with the same order (random subproducts)."""
        if not self.gens:
            return []
        rng = rng or random.Random(self.seed ^ 0x9E3779B9)
        order = self.order
        for k in (2, 3, 4):
            for _ in range(tries):
                cand = []
                for _ in range(k):
                    g = identity(self.degree)
                    for h in self.gens:
                        if rng.random() < 0.5:
                            g = compose(g, h)
                    if not is_identity(g):
                        cand.append(g)
                if not cand:
                    continue
                try:
                    if PermGroup(self.degree, cand, expected_order=order,
                                 seed=self.seed).order == order:
                        return cand
                except AssertionError:
                    continue
        return list(self.gens)

    def rank(self) -> int:
        """Number of suborbits of a transitive group (orbits of G_x)."""
        if not self.is_transitive():
            raise ValueError("rank is defined for transitive groups only")
        return len(self.stabilizer(0).orbits())

    # -- blocks of imprimitivity ----------------------------------------------

    def minimal_block(self, beta: int, gamma: int) -> frozenset:
        """Smallest block of imprimitivity containing {beta, gamma} for this
        group acting on the orbit of beta (Atkinson's algorithm)."""
        if beta == gamma:
            raise ValueError("minimal_block needs two distinct points")
        parent = np.arange(self.degree, dtype=np.int32)

        def find(x):
            root = x
            while parent[root] != root:
                root = int(parent[root])
            while parent[x] != root:
                parent[x], x = root, int(parent[x])
            return root

        stack = [(beta, gamma)]
        while stack:
            a, b = stack.pop()
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            parent[rb] = ra
            for g in self.gens:
                stack.append((int(g[a]), int(g[b])))
        rb = find(beta)
        return frozenset(int(x) for x in range(self.degree) if find(x) == rb)

    def block_join(self, beta: int, points) -> frozenset:
        """The smallest block containing beta and all of points."""
        parent = np.arange(self.degree, dtype=np.int32)

        def find(x):
            root = x
            while parent[root] != root:
                root = int(parent[root])
            while parent[x] != root:
                parent[x], x = root, int(parent[x])
            return root

        stack = [(beta, int(p)) for p in points if int(p) != beta]
        while stack:
            a, b = stack.pop()
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            parent[rb] = ra
            for g in self.gens:
                stack.append((int(g[a]), int(g[b])))
        rb = find(beta)
        return frozenset(int(x) for x in range(self.degree) if find(x) == rb)

    def verify_block(self, block) -> bool:
        """Generators map the block to disjoint-or-equal images across one
        full orbit of the block."""
        block = frozenset(int(x) for x in block)
        size = len(block)
        seen = {block}
        covered = set(block)
        queue = [tuple(sorted(block))]
        while queue:
            cur = queue.pop()
            for g in self.gens:
                img = frozenset(int(g[x]) for x in cur)
                if img in seen:
                    continue
                if img & covered:
                    return False
                seen.add(img)
                covered |= img
                queue.append(tuple(sorted(img)))
        return all(len(b) == size for b in seen)

    def all_blocks_through(self, beta: int, cap: int = 10000) -> list[frozenset]:
        """Every nontrivial block of imprimitivity containing beta, for this
        group transitive on the orbit of beta.

        Any block through beta is a union of orbits of the point stabilizer
        G_beta, and minimal_block(beta, -) is constant on those orbits, so
        one representative per G_beta-orbit suffices; the block set is the
        join-closure of those minimal blocks.
        """
        carrier = set(self.orbit(beta))
        n = len(carrier)
        if n <= 2:
            return []
        stab = self.stabilizer(beta)
        reps = []
        seen = {beta}
        for x in sorted(carrier):
            if x in seen:
                continue
            orb = stab.orbit(x)
            seen.update(orb)
            reps.append(x)
        minimal = set()
        for gamma in reps:
            blk = self.minimal_block(beta, gamma)
            if 1 < len(blk) < n:
                minimal.add(blk)
        blocks = set(minimal)
        frontier = list(minimal)
        while frontier:
            if len(blocks) > cap:
                raise RuntimeError(f"block lattice exceeded cap {cap}")
            nxt = []
            for b1 in frontier:
                for b2 in minimal:
                    if b2 <= b1:
                        continue
                    joined = self.block_join(beta, b1 | b2)
                    if len(joined) < n and joined not in blocks:
                        blocks.add(joined)
                        nxt.append(joined)
            frontier = nxt
        out = sorted(blocks, key=lambda b: (len(b), sorted(b)))
        for b in out:
            if n % len(b) != 0 or not self.verify_block(b):
                raise AssertionError(f"non-block of size {len(b)} escaped closure")
        return out

    # -- coset action ------------------------------------------------------------

    def coset_rep_key(self, g: np.ndarray, sub: "PermGroup") -> bytes:
        """Canonical key of the right coset (sub)g.

        Greedily minimizes base-point images over sub along sub's stabilizer
        chain; since a base leaves no residual freedom, the minimizing element
        of the coset is unique and its full image array is the key.
        """
        chain = sub._chain()
        for lv in chain:
            best, src = min((int(g[x]), x) for x in lv.orbit)
            if src != lv.point:
                g = compose(lv.rep_to(src, self.degree), g)
        return g.tobytes()

    def coset_action(self, sub: "PermGroup", expected_order: int | None = None):
        """Right-multiplication action on right cosets of sub.

        Returns (image group on [0, |G:sub|), coset representatives).  Coset
        identity is decided by canonical minimal base images under sub's
        chain, which is equivalent to a membership sift of x * rep^{-1}.
        expected_order, when given, is the order of the action image (|G|
        for a faithful action) and certifies its BSGS.
        """
        for g in sub.gens:
            if not self.contains(g):
                raise ValueError("not a subgroup: generator fails membership sift")
        index = self.order // sub.order
        e = identity(self.degree)
        keys = {self.coset_rep_key(e, sub): 0}
        reps = [e]
        edges: dict[tuple[int, int], int] = {}
        head = 0
        while head < len(reps):
            for k, s in enumerate(self.gens):
                h = compose(reps[head], s)
                key = self.coset_rep_key(h, sub)
                j = keys.get(key)
                if j is None:
                    j = len(reps)
                    keys[key] = j
                    reps.append(h)
                edges[(head, k)] = j
            head += 1
        if len(reps) != index:
            raise AssertionError(
                f"coset enumeration found {len(reps)} cosets, index is {index}")
        new_gens = []
        for k in range(len(self.gens)):
            img = np.empty(index, dtype=np.int32)
            for i in range(index):
                img[i] = edges[(i, k)]
            new_gens.append(img)
        image = PermGroup(index, new_gens, seed=self.seed,
                          expected_order=expected_order,
                          name=f"{self.name}/cosets")
        return image, reps

    # -- subgroup search -----------------------------------------------------------

    def normal_closure(self, seeds) -> "PermGroup":
        gens: list[np.ndarray] = []
        K = PermGroup(self.degree, [], seed=self.seed)
        queue = [s for s in seeds if not is_identity(s)]
        while queue:
            x = queue.pop()
            if K.contains(x):
                continue
            gens.append(x)
            K = PermGroup(self.degree, gens, seed=self.seed)
            for h in self.gens:
                queue.append(compose(compose(inverse(h), x), h))
        return K

    def normal_subgroup_of_index(self, r: int, rng: random.Random | None = None,
                                 budget: int = 48) -> "PermGroup":
        """A verified normal subgroup of index r.

        Built as the normal closure of commutators of generator pairs and
        r-th powers of a growing sample of elements; works whenever the
        quotient witnessing the index is abelian of exponent r (all the
        catalogued uses have quotient C_2).
        """
        rng = rng or random.Random(self.seed ^ 0xC0117)
        seeds = []
        for a in self.gens:
            for b in self.gens:
                seeds.append(compose(compose(a, b), inverse(compose(b, a))))
        for g in self.gens:
            seeds.append(perm_power(g, r))
        N = self.normal_closure(seeds)
        tries = 0
        while self.order // N.order > r and tries < budget:
            g = self.random_element(rng)
            N = self.normal_closure(N.gens + [perm_power(g, r)])
            tries += 1
        if self.order // N.order != r:
            raise RuntimeError(
                f"no normal subgroup of index {r} found (index reached "
                f"{self.order // N.order})")
        for g in N.gens:
            for h in self.gens:
                if not N.contains(compose(compose(inverse(h), g), h)):
                    raise AssertionError("normality verification failed")
        return N

    def subgroup_of_index(self, r: int, rng: random.Random | None = None,
                          accept=None, attempts: int = 2000) -> "PermGroup":
        """Search for an index-r subgroup by sampling small generating sets.

        Used for catalogue rows whose point stabilizer is not normal in the
        block stabilizer; accept() runs the caller's downstream verification
        and the first subgroup of the right order passing it is returned.
        """
        if self.order % r:
            raise ValueError(f"index {r} does not divide the group order")
        target = self.order // r
        rng = rng or random.Random(self.seed ^ 0x5B6)
        for attempt in range(attempts):
            xs = [self.random_element(rng) for _ in range(2)]
            S = PermGroup(self.degree, xs, seed=self.seed)
            o = S.order
            if o != target and target % o == 0 and o > 1:
                xs.append(self.random_element(rng))
                S = PermGroup(self.degree, xs, seed=self.seed)
                o = S.order
            if o != target:
                continue
            if accept is None or accept(S):
                return S
        raise RuntimeError(f"no index-{r} subgroup found in {attempts} attempts")

    # -- setwise stabilizer (oracle) ----------------------------------------------

    def setwise_stabilizer(self, points, leaf_cap: int = 2_000_000) -> "PermGroup":
        """Backtracking setwise stabilizer; meant for degree <= a few hundred."""
        S = frozenset(int(p) for p in points)
        rebased = PermGroup(self.degree, self.gens, expected_order=self.order,
                            base_hint=sorted(S), seed=self.seed,
                            name=f"{self.name}|setstab")
        rebased.order
        chain = rebased._levels
        found: list[np.ndarray] = []
        stab = PermGroup(self.degree, [], seed=self.seed)
        counter = [0]

        def search(level: int, h: np.ndarray):
            nonlocal stab
            counter[0] += 1
            if counter[0] > leaf_cap:
                raise RuntimeError("setwise stabilizer search exceeded cap")
            if level == len(chain):
                if frozenset(int(h[x]) for x in S) == S and not is_identity(h) \
                        and not stab.contains(h):
                    found.append(h)
                    stab = PermGroup(self.degree, list(found), seed=self.seed)
                return
            lv = chain[level]
            want = lv.point in S
            for x in lv.orbit:
                if (int(h[x]) in S) != want:
                    continue
                search(level + 1, compose(lv.rep_to(x, self.degree), h))

        search(0, identity(self.degree))
        return PermGroup(self.degree, list(found), seed=self.seed,
                         name=f"{self.name}_setstab")


class _Shaker:
    """Product-replacement random element generator."""

    def __init__(self, gens, rng: random.Random, slots: int = 10, burn: int = 60):
        self.rng = rng
        base = [g.copy() for g in gens]
        while len(base) < slots:
            base.append(base[len(base) % len(gens)].copy())
        self.slots = base
        self.acc = identity(len(gens[0]))
        for _ in range(burn):
            self._step()

    def _step(self):
        rng = self.rng
        n = len(self.slots)
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        if rng.random() < 0.5:
            self.slots[i] = compose(self.slots[i], self.slots[j])
        else:
            self.slots[i] = compose(self.slots[j], self.slots[i])
        self.acc = compose(self.acc, self.slots[i])

    def element(self) -> np.ndarray:
        self._step()
        return self.acc.copy()


# -- line and flag orbits ------------------------------------------------------


def line_orbit(gens, line, max_lines: int | None = None):
    """Orbit of a point set under <gens>, with per-generator image maps.

    Lines are sorted tuples.  Returns (lines, limg): lines in BFS order,
    limg[k] an int32 array mapping line index -> image index under gens[k].
    Image rows are computed vectorized one BFS layer at a time.
    """
    line0 = tuple(sorted(int(x) for x in line))
    idx = {line0: 0}
    rows = [line0]
    layer = [0]
    edges: list[dict[int, int]] = [dict() for _ in gens]
    while layer:
        block = np.array([rows[i] for i in layer], dtype=np.int32)
        nxt = []
        for k, g in enumerate(gens):
            imgs = np.sort(g[block], axis=1)
            ek = edges[k]
            for row_i, src in enumerate(layer):
                t = tuple(int(v) for v in imgs[row_i])
                j = idx.get(t)
                if j is None:
                    j = len(rows)
                    idx[t] = j
                    rows.append(t)
                    nxt.append(j)
                    if max_lines is not None and j >= max_lines:
                        raise RuntimeError("line orbit exceeded max_lines")
                ek[src] = j
        layer = nxt
    n = len(rows)
    limg = []
    for k in range(len(gens)):
        arr = np.empty(n, dtype=np.int32)
        ek = edges[k]
        for i in range(n):
            arr[i] = ek[i]
        limg.append(arr)
    return rows, limg


def flag_transitive_on_line(G: PermGroup, line, precomputed=None) -> bool:
    """Whether the setwise stabilizer of `line` in G is transitive on it.

    Tested without computing the stabilizer: the orbit of the flag
    (line[0], line) is expanded and we report whether it reaches every flag
    on `line`.  Success exits early; failure exhausts the orbit, which is
    bounded by |line-orbit| * |line|.  `precomputed` may carry a
    (lines, limg) pair from line_orbit on the same line set.
    """
    line0 = tuple(sorted(int(x) for x in line))
    if len(line0) == 1:
        return True
    lines, limg = precomputed if precomputed is not None else line_orbit(G.gens, line0)
    nl = len(lines)
    # flag key = point * nl + line_id; the base line has id 0
    want = {int(p) * nl for p in line0[1:]}
    start = int(line0[0]) * nl
    visited = {start}
    pts = np.array([line0[0]], dtype=np.int64)
    lids = np.array([0], dtype=np.int64)
    while pts.size:
        parts_p = []
        parts_l = []
        for k, g in enumerate(G.gens):
            ip = g[pts].astype(np.int64)
            il = limg[k][lids].astype(np.int64)
            keys = ip * nl + il
            fresh = [i for i, key in enumerate(keys.tolist()) if key not in visited]
            if fresh:
                kk = keys[fresh].tolist()
                visited.update(kk)
                want.difference_update(kk)
                parts_p.append(ip[fresh])
                parts_l.append(il[fresh])
        if not want:
            return True
        if parts_p:
            pts = np.concatenate(parts_p)
            lids = np.concatenate(parts_l)
        else:
            break
    return not want


def write_group_file(path, degree: int, gens):
    with open(path, "w") as fh:
        fh.write(f"{degree}\n")
        for g in gens:
            fh.write(" ".join(str(int(x)) for x in g) + "\n")


def read_group_file(path):
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    degree = int(raw[0])
    gens = []
    for ln in raw[1:]:
        imgs = [int(t) for t in ln.split()]
        if len(imgs) != degree:
            raise ValueError("generator length does not match degree")
        gens.append(perm_from_images(imgs))
    return degree, gens
