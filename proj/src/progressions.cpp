#include "steklov/progressions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace steklov {

namespace {
constexpr long kMaxResidueTable = 10'000'000;
constexpr int kMaxSignSearch = 20;
}

APPair::APPair(Rational a_, Rational b_, std::string unit_)
    : a(std::move(a_)), b(std::move(b_)), unit(std::move(unit_)) {
    if (!a.positive()) throw PreconditionError("APPair: modulus must be positive");
    b = b.mod(a);
}

bool operator<(const APPair& x, const APPair& y) {
    if (x.unit != y.unit) return x.unit < y.unit;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
}

std::string APPair::str() const {
    std::string s = "(" + a.str() + ", " + b.str() + ")";
    if (!unit.empty()) s += "@" + unit;
    return s;
}

void GenMultiset::normalize() { std::sort(pairs.begin(), pairs.end()); }

bool GenMultiset::all_rational() const {
    return std::all_of(pairs.begin(), pairs.end(),
                       [](const APPair& p) { return p.unit.empty(); });
}

GenMultiset GenMultiset::united(const GenMultiset& o) const {
    std::vector<APPair> v = pairs;
    v.insert(v.end(), o.pairs.begin(), o.pairs.end());
    return GenMultiset(std::move(v));
}

std::string GenMultiset::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) s += ", ";
        s += pairs[i].str();
    }
    return s + "}";
}

std::vector<Rational> generate(const GenMultiset& R, const Rational& T) {
    if (!T.positive()) throw PreconditionError("generate: T must be positive");
    if (!R.all_rational())
        throw CommensurabilityError("generate: tagged units have no numeric scale");
    std::vector<Rational> out;
    for (const auto& p : R.pairs) {
        Rational x = p.a + p.b;
        while (x <= T) {
            out.push_back(x);
            x += p.a;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

GenMultiset reflect(const GenMultiset& R) {
    std::vector<APPair> v;
    v.reserve(R.pairs.size());
    for (const auto& p : R.pairs) v.emplace_back(p.a, -p.b, p.unit);
    return GenMultiset(std::move(v));
}

namespace {

// Residue table of a rational multiset sharing one commensurability class.
ResiduePattern residue_pattern_impl(const std::vector<APPair>& pairs) {
    if (pairs.empty()) return {Rational(1), Rational(0), {}};
    Rational P = pairs.front().a;
    Rational t0 = pairs.front().a + pairs.front().b;
    for (const auto& p : pairs) {
        P = rational_lcm(P, p.a);
        t0 = std::max(t0, p.a + p.b);
    }
    BigInt entries = 0;
    for (const auto& p : pairs) {
        Rational ratio = P / p.a;
        entries += ratio.num();
        if (entries > kMaxResidueTable)
            throw Error("residue_pattern: table exceeds the supported size");
    }
    ResiduePattern rp{P, t0, {}};
    for (const auto& p : pairs) {
        long steps = static_cast<long>((P / p.a).num());
        Rational r = p.b.mod(P);
        for (long k = 0; k < steps; ++k) {
            ++rp.counts[r];
            r += p.a;
            if (r >= P) r -= P;
        }
    }
    return rp;
}

}  // namespace

ResiduePattern residue_pattern(const GenMultiset& R) {
    if (!R.all_rational())
        throw CommensurabilityError("residue_pattern: requires a single rational class");
    return residue_pattern_impl(R.pairs);
}

namespace {

AEVerdict compare_patterns(const std::vector<APPair>& p1, const std::vector<APPair>& p2) {
    if (p1.empty() && p2.empty()) return {true, "both empty", std::nullopt};
    if (p1.empty() || p2.empty()) {
        const auto& pp = p1.empty() ? p2 : p1;
        return {false, "one side generates nothing", Rational(pp.front().a + pp.front().b)};
    }
    ResiduePattern r1 = residue_pattern_impl(p1);
    ResiduePattern r2 = residue_pattern_impl(p2);
    Rational P = rational_lcm(r1.period, r2.period);
    Rational t0 = std::max(r1.t0, r2.t0);

    // Lift both tables to the common period and compare multiplicities.
    auto lift = [&P](const ResiduePattern& r) {
        std::map<Rational, long> out;
        Rational reps = P / r.period;
        long n = static_cast<long>(reps.num());
        for (const auto& [res, cnt] : r.counts) {
            Rational x = res;
            for (long k = 0; k < n; ++k) {
                out[x] += cnt;
                x += r.period;
            }
        }
        return out;
    };
    std::map<Rational, long> t1 = lift(r1), t2 = lift(r2);
    for (const auto& [res, cnt] : t1) {
        auto it = t2.find(res);
        long c2 = it == t2.end() ? 0 : it->second;
        if (cnt != c2) {
            Rational wit = res + P * Rational((t0 / P).floor() + 1, 1);
            return {false,
                    "multiplicity " + std::to_string(cnt) + " vs " + std::to_string(c2) +
                        " on residue " + res.str() + " mod " + P.str(),
                    wit};
        }
    }
    for (const auto& [res, cnt] : t2) {
        if (t1.find(res) == t1.end() && cnt != 0) {
            Rational wit = res + P * Rational((t0 / P).floor() + 1, 1);
            return {false, "residue " + res.str() + " only on the second side", wit};
        }
    }
    return {true, "patterns agree above " + t0.str(), std::nullopt};
}

}  // namespace

AEVerdict almost_equal(const GenMultiset& R1, const GenMultiset& R2) {
    auto classes = commensurability_partition(R1, R2);
    for (const auto& cls : classes) {
        AEVerdict v = compare_patterns(cls.from_r1, cls.from_r2);
        if (!v.equal_ae) {
            if (!cls.key.empty()) v.witness += " [unit " + cls.key + "]";
            return v;
        }
    }
    Rational bound(0);
    for (const auto& cls : classes)
        for (const auto& p : cls.from_r1) bound = std::max(bound, p.a + p.b);
    for (const auto& cls : classes)
        for (const auto& p : cls.from_r2) bound = std::max(bound, p.a + p.b);
    return {true, "multisets agree above " + bound.str(), std::nullopt};
}

AEVerdict cab_equivalent(const GenMultiset& R1, const GenMultiset& R2) {
    return almost_equal(R1, R2);
}

RefinementResult refinement(const APPair& p, long m) {
    if (m < 1) throw PreconditionError("refinement: m must be >= 1");
    RefinementResult out;
    for (long i = 0; i < m; ++i)
        out.pieces.emplace_back(p.a * Rational(m), p.b + Rational(i) * p.a, p.unit);
    for (long i = 1; i < m; ++i) out.dropped_head.push_back(Rational(i) * p.a + p.b);
    return out;
}

std::optional<std::vector<APPair>> find_refinement_decomposition(const APPair& target,
                                                                 const GenMultiset& R) {
    for (const auto& p : R.pairs)
        if (p.unit != target.unit) return std::nullopt;
    Rational P = target.a;
    for (const auto& p : R.pairs) P = rational_lcm(P, p.a);

    // Available refined pieces at modulus P, keyed by residue.
    std::multiset<Rational> slots;
    {
        long steps = static_cast<long>((P / target.a).num());
        Rational r = target.b.mod(P);
        for (long k = 0; k < steps; ++k) {
            slots.insert(r);
            r += target.a;
            if (r >= P) r -= P;
        }
    }
    std::map<Rational, std::vector<APPair>> supply;
    for (const auto& p : R.pairs) {
        long steps = static_cast<long>((P / p.a).num());
        Rational r = p.b.mod(P);
        for (long k = 0; k < steps; ++k) {
            if (r.congruent(target.b, target.a)) supply[r].emplace_back(P, r, p.unit);
            r += p.a;
            if (r >= P) r -= P;
        }
    }
    std::vector<APPair> chosen;
    for (const Rational& s : slots) {
        auto it = supply.find(s);
        if (it == supply.end() || it->second.empty()) return std::nullopt;
        chosen.push_back(it->second.back());
        it->second.pop_back();
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

namespace {

// Integer residue cover counts modulo lcm of the moduli.
struct IntCover {
    long L = 1;
    std::vector<long> count;
};

IntCover integer_cover(const GenMultiset& R) {
    if (R.pairs.empty()) throw PreconditionError("covering: empty multiset");
    BigInt L(1);
    for (const auto& p : R.pairs) {
        if (!p.unit.empty() || !p.a.is_integer() || !p.b.is_integer())
            throw PreconditionError("covering: pairs must be integral");
        L = lcm(L, p.a.num());
        if (L > kMaxResidueTable) throw Error("covering: lcm exceeds supported size");
    }
    IntCover c;
    c.L = static_cast<long>(L);
    c.count.assign(static_cast<std::size_t>(c.L), 0);
    for (const auto& p : R.pairs) {
        long a = static_cast<long>(p.a.num());
        long b = static_cast<long>(p.b.num());
        for (long x = b % a; x < c.L; x += a) ++c.count[static_cast<std::size_t>(x)];
    }
    return c;
}

}  // namespace

bool is_covering(const GenMultiset& R) {
    IntCover c = integer_cover(R);
    return std::all_of(c.count.begin(), c.count.end(), [](long n) { return n >= 1; });
}

bool is_exact_covering(const GenMultiset& R) {
    IntCover c = integer_cover(R);
    return std::all_of(c.count.begin(), c.count.end(), [](long n) { return n == 1; });
}

bool is_distinct_covering(const GenMultiset& R) {
    if (!is_covering(R)) return false;
    std::set<Rational> moduli;
    for (const auto& p : R.pairs)
        if (!moduli.insert(p.a).second) return false;
    return true;
}

namespace {

std::string canonical_key(const std::vector<APPair>& v) {
    std::string s;
    for (const auto& p : v) s += p.a.str() + ":" + p.b.str() + ";";
    return s;
}

// Backtracking merge search over equal-modulus groups, memoized.
bool natural_search(std::vector<APPair> state, std::map<std::string, bool>& memo,
                    std::vector<MergeStep>& steps) {
    std::sort(state.begin(), state.end());
    if (state.size() == 1 && state[0].a == Rational(1) && state[0].b.is_zero()) return true;
    std::string key = canonical_key(state);
    if (auto it = memo.find(key); it != memo.end() && !it->second) return false;

    std::set<Rational> moduli;
    for (const auto& p : state) moduli.insert(p.a);
    for (const Rational& c : moduli) {
        long cv = static_cast<long>(c.num());
        for (long m = 2; m <= cv; ++m) {
            if (cv % m != 0) continue;
            Rational step(cv / m);
            // Collect present offsets with modulus c.
            std::set<Rational> offs;
            for (const auto& p : state)
                if (p.a == c) offs.insert(p.b);
            for (const Rational& base : offs) {
                bool have_all = true;
                for (long i = 1; i < m && have_all; ++i)
                    if (!offs.count((base + Rational(i) * step).mod(c))) have_all = false;
                if (!have_all) continue;
                // Merge {(c, base + i*step)} into (step, base mod step).
                std::vector<APPair> next;
                std::vector<APPair> children;
                std::vector<bool> used(state.size(), false);
                for (long i = 0; i < m; ++i) {
                    Rational want = (base + Rational(i) * step).mod(c);
                    for (std::size_t t = 0; t < state.size(); ++t) {
                        if (!used[t] && state[t].a == c && state[t].b == want) {
                            used[t] = true;
                            children.push_back(state[t]);
                            break;
                        }
                    }
                }
                if (children.size() != static_cast<std::size_t>(m)) continue;
                for (std::size_t t = 0; t < state.size(); ++t)
                    if (!used[t]) next.push_back(state[t]);
                APPair parent(step, base.mod(step));
                next.push_back(parent);
                if (natural_search(next, memo, steps)) {
                    steps.push_back({parent, children});
                    return true;
                }
            }
        }
    }
    memo[key] = false;
    return false;
}

}  // namespace

std::optional<SplitTree> is_natural_exact(const GenMultiset& R) {
    if (!is_exact_covering(R))
        throw PreconditionError("is_natural_exact: input is not an exact covering system");
    std::map<std::string, bool> memo;
    std::vector<MergeStep> steps;
    if (!natural_search(R.pairs, memo, steps)) return std::nullopt;
    return SplitTree{std::move(steps)};
}

bool anomaly_check(const GenMultiset& R) {
    for (const auto& p : R.pairs) {
        Rational four_a = Rational(4) * p.a;
        if ((p.a + Rational(4) * p.b).mod(four_a).is_zero()) return false;
        if ((p.a - Rational(4) * p.b).mod(four_a).is_zero()) return false;
    }
    return true;
}

SignReduction sign_reduction(const Rational& a, const Rational& b, const GenMultiset& R) {
    if (R.pairs.size() > kMaxSignSearch)
        throw PreconditionError("sign_reduction: multiset too large for sign search");
    SignReduction out;
    out.hypothesis_ok = !b.mod(a).is_zero() && !(b - a / Rational(2)).mod(a).is_zero() &&
                        !(b + a / Rational(4)).mod(a).is_zero() &&
                        !(b - a / Rational(4)).mod(a).is_zero();
    GenMultiset target({APPair(a, b)});
    const std::size_t k = R.pairs.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<APPair> flipped;
        std::vector<int> signs;
        for (std::size_t i = 0; i < k; ++i) {
            int eps = (mask >> i) & 1 ? -1 : 1;
            signs.push_back(eps);
            flipped.emplace_back(R.pairs[i].a,
                                 eps > 0 ? R.pairs[i].b : -R.pairs[i].b,
                                 R.pairs[i].unit);
        }
        if (almost_equal(target, GenMultiset(std::move(flipped))).equal_ae) {
            out.signs = signs;
            return out;
        }
    }
    return out;
}

std::vector<std::vector<long>> unit_fraction_tuples(int k) {
    if (k < 1) throw PreconditionError("unit_fraction_tuples: k must be positive");
    std::vector<std::vector<long>> out;
    std::vector<long> cur;
    // DFS over nondecreasing p with Σ 2/p_j = 1, exact arithmetic.
    auto rec = [&](auto&& self, Rational remaining, long pmin, int slots) -> void {
        if (slots == 0) {
            if (remaining.is_zero()) out.push_back(cur);
            return;
        }
        if (!remaining.positive()) return;
        // 2/p <= remaining  and  slots * 2/p >= remaining.
        Rational lo = Rational(2) / remaining;                    // p >= 2/remaining
        Rational hi = Rational(2 * slots) / remaining;            // p <= 2*slots/remaining
        long pstart = std::max(pmin, static_cast<long>(lo.floor()) + (lo.is_integer() ? 0 : 1));
        long pend = static_cast<long>(hi.floor());
        if (pend > 10'000) throw Error("unit_fraction_tuples: denominator bound exceeded");
        for (long p = pstart; p <= pend; ++p) {
            cur.push_back(p);
            self(self, remaining - Rational(2, p), p, slots - 1);
            cur.pop_back();
        }
    };
    rec(rec, Rational(1), 1, k);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Doubled-reflected multiset generated by slots with offset value eps*beta+c.
GenMultiset doubled_from_slots(const std::vector<FamilySlot>& slots, const Rational& beta) {
    std::vector<APPair> v;
    for (const auto& s : slots) {
        Rational off = Rational(s.eps) * beta + s.c;
        v.emplace_back(s.a, off);
        v.emplace_back(s.a, -off);
    }
    return GenMultiset(std::move(v));
}

GenMultiset doubled_single(const Rational& beta) {
    return GenMultiset({APPair(Rational(1), beta), APPair(Rational(1), -beta)});
}

// Slot canonicalization under per-pair reflection b -> -b.
FamilySlot canonical_slot(FamilySlot s) {
    s.c = s.c.mod(s.a);
    FamilySlot refl{s.a, -s.eps, (-s.c).mod(s.a)};
    auto less = [](const FamilySlot& x, const FamilySlot& y) {
        if (x.eps != y.eps) return x.eps > y.eps;  // prefer +1
        return x.c < y.c;
    };
    return less(s, refl) ? s : refl;
}

bool slot_order(const FamilySlot& x, const FamilySlot& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.eps != y.eps) return x.eps > y.eps;
    return x.c < y.c;
}

std::string family_key(const ClassifyFamily& f) {
    std::string s = f.pinned_quarter ? "pin:" : "free:";
    for (const auto& sl : f.slots)
        s += sl.a.str() + "|" + std::to_string(sl.eps) + "|" + sl.c.str() + ";";
    return s;
}

// Value-level canonical key of a pinned family at beta = 1/4.
std::string pinned_value_key(const std::vector<FamilySlot>& slots) {
    std::vector<std::pair<Rational, Rational>> vals;
    const Rational quarter(1, 4);
    for (const auto& s : slots) {
        Rational v = (Rational(s.eps) * quarter + s.c).mod(s.a);
        Rational w = (-v).mod(s.a);
        vals.emplace_back(s.a, std::min(v, w));
    }
    std::sort(vals.begin(), vals.end());
    std::string key;
    for (const auto& [a, v] : vals) key += a.str() + "|" + v.str() + ";";
    return key;
}

}  // namespace

std::string ClassifyFamily::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i) s += ", ";
        s += "(" + slots[i].a.str() + ", ";
        if (pinned_quarter) {
            Rational v = (Rational(slots[i].eps) * Rational(1, 4) + slots[i].c).mod(slots[i].a);
            s += v.str();
        } else {
            s += (slots[i].eps > 0 ? std::string("b") : std::string("-b"));
            if (!slots[i].c.is_zero()) s += "+" + slots[i].c.str();
        }
        s += ")";
    }
    s += "}";
    if (pinned_quarter) s += " [b = 1/4]";
    return s;
}

std::vector<ClassifyFamily> classify_vs_single(int k2) {
    if (k2 != 2 && k2 != 3)
        throw PreconditionError("classify_vs_single: k2 must be 2 or 3");
    const Rational beta1(1, 10), beta2(1, 14), quarter(1, 4);

    std::vector<ClassifyFamily> families;
    std::set<std::string> seen_free;
    std::set<std::string> seen_pinned_values;
    std::set<std::string> free_values_at_quarter;

    for (const auto& tuple : unit_fraction_tuples(k2)) {
        std::vector<Rational> moduli;
        for (long p : tuple) moduli.emplace_back(p, 2);

        // Free-offset families: only integer moduli and integer shifts can
        // reproduce the two offset classes ±beta for generic beta.
        bool all_int = std::all_of(moduli.begin(), moduli.end(),
                                   [](const Rational& a) { return a.is_integer(); });
        if (all_int) {
            std::vector<std::vector<FamilySlot>> options;
            for (const auto& a : moduli) {
                std::vector<FamilySlot> opts;
                long av = static_cast<long>(a.num());
                for (int eps : {1, -1})
                    for (long c = 0; c < av; ++c) opts.push_back({a, eps, Rational(c)});
                options.push_back(std::move(opts));
            }
            std::vector<FamilySlot> pick(moduli.size());
            auto rec = [&](auto&& self, std::size_t i) -> void {
                if (i == moduli.size()) {
                    if (almost_equal(doubled_single(beta1),
                                     doubled_from_slots(pick, beta1)).equal_ae &&
                        almost_equal(doubled_single(beta2),
                                     doubled_from_slots(pick, beta2)).equal_ae) {
                        ClassifyFamily f;
                        for (const auto& s : pick) f.slots.push_back(canonical_slot(s));
                        std::sort(f.slots.begin(), f.slots.end(), slot_order);
                        if (seen_free.insert(family_key(f)).second) {
                            families.push_back(f);
                            free_values_at_quarter.insert(pinned_value_key(f.slots));
                        }
                    }
                    return;
                }
                for (const auto& s : options[i]) {
                    pick[i] = s;
                    self(self, i + 1);
                }
            };
            rec(rec, 0);
        }
    }

    for (const auto& tuple : unit_fraction_tuples(k2)) {
        std::vector<Rational> moduli;
        for (long p : tuple) moduli.emplace_back(p, 2);

        // Pinned beta = 1/4 families on the quarter grid, minus everything
        // already reachable with a free offset.
        std::vector<std::vector<FamilySlot>> options;
        bool feasible = true;
        for (const auto& a : moduli) {
            std::vector<FamilySlot> opts;
            long steps = static_cast<long>((Rational(4) * a).num());
            for (long c4 = 0; c4 < steps; ++c4) {
                FamilySlot s{a, 1, Rational(c4, 4)};
                // Element classes mod 1 must stay inside {1/4, 3/4}.
                Rational off = (quarter + s.c).mod(a);
                bool ok = true;
                Rational x = off.mod(Rational(1));
                Rational cls = x;
                long reps = static_cast<long>((a.den() == 1 ? Rational(1) : Rational(2)).num());
                for (long r = 0; r < reps; ++r) {
                    if (cls != quarter && cls != Rational(3, 4)) ok = false;
                    cls = (cls + a).mod(Rational(1));
                }
                if (ok) opts.push_back(s);
            }
            if (opts.empty()) feasible = false;
            options.push_back(std::move(opts));
        }
        if (!feasible) continue;
        std::vector<FamilySlot> pick(moduli.size());
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == moduli.size()) {
                if (!almost_equal(doubled_single(quarter),
                                  doubled_from_slots(pick, quarter)).equal_ae)
                    return;
                std::string vkey = pinned_value_key(pick);
                if (free_values_at_quarter.count(vkey)) return;
                if (!seen_pinned_values.insert(vkey).second) return;
                ClassifyFamily f;
                f.pinned_quarter = true;
                for (const auto& s : pick) f.slots.push_back(canonical_slot(s));
                std::sort(f.slots.begin(), f.slots.end(), slot_order);
                families.push_back(f);
                return;
            }
            for (const auto& s : options[i]) {
                pick[i] = s;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    }
    return families;
}

std::vector<CommClass> commensurability_partition(const GenMultiset& R1,
                                                  const GenMultiset& R2) {
    // Union-find over unit symbols; '+'-joined tags assert rational relations.
    std::map<std::string, std::string> parent;
    auto find = [&](std::string x) {
        while (parent.count(x) && parent[x] != x) x = parent[x];
        return x;
    };
    auto unite = [&](const std::string& a, const std::string& b) {
        if (!parent.count(a)) parent[a] = a;
        if (!parent.count(b)) parent[b] = b;
        std::string ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    };
    auto split_units = [](const std::string& tag) {
        std::vector<std::string> us;
        std::stringstream ss(tag);
        std::string u;
        while (std::getline(ss, u, '+'))
            if (!u.empty()) us.push_back(u);
        return us;
    };
    auto touch = [&](const GenMultiset& R) {
        for (const auto& p : R.pairs) {
            auto us = split_units(p.unit);
            if (us.empty()) {
                if (!parent.count("")) parent[""] = "";
                continue;
            }
            for (auto& u : us) {
                if (!parent.count(u)) parent[u] = u;
                unite(us.front(), u);
            }
        }
    };
    touch(R1);
    touch(R2);

    std::map<std::string, CommClass> classes;
    auto add = [&](const GenMultiset& R, bool first) {
        for (const auto& p : R.pairs) {
            auto us = split_units(p.unit);
            std::string key = us.empty() ? "" : find(us.front());
            auto& cls = classes[key];
            cls.key = key;
            (first ? cls.from_r1 : cls.from_r2).push_back(p);
        }
    };
    add(R1, true);
    add(R2, false);

    std::vector<CommClass> out;
    out.reserve(classes.size());
    for (auto& [k, c] : classes) out.push_back(std::move(c));
    return out;
}

}  // namespace steklov
