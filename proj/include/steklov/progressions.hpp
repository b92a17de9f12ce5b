#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklov/rational.hpp"

namespace steklov {

/// Arithmetic progression aℕ + b (ℕ starts at 1), offset canonicalized to
/// b in [0, a).  A nonempty unit tag marks the commensurability class the
/// pair lives in: the progression is (a·u)ℕ + b·u for the tagged unit u.
/// Tags may name several units joined by '+' to declare that those units are
/// rationally related.
struct APPair {
    Rational a;
    Rational b;
    std::string unit;

    APPair() : a(1), b(0) {}
    APPair(Rational a_, Rational b_, std::string unit_ = "");

    friend bool operator==(const APPair& x, const APPair& y) {
        return x.a == y.a && x.b == y.b && x.unit == y.unit;
    }
    friend bool operator<(const APPair& x, const APPair& y);
    std::string str() const;
};

/// Finite multiset of progressions; generates the union multiset S(R).
struct GenMultiset {
    std::vector<APPair> pairs;

    GenMultiset() = default;
    GenMultiset(std::initializer_list<APPair> l) : pairs(l) { normalize(); }
    explicit GenMultiset(std::vector<APPair> p) : pairs(std::move(p)) { normalize(); }

    void normalize();  // canonical sort
    bool all_rational() const;
    GenMultiset united(const GenMultiset& o) const;
    std::string str() const;
};

/// All elements a·n + b <= T with n >= 1, with multiplicity, sorted.
std::vector<Rational> generate(const GenMultiset& R, const Rational& T);

/// (a, b) -> (a, -b) canonicalized; an involution.
GenMultiset reflect(const GenMultiset& R);

/// Eventual periodic multiplicity structure of S(R): for x >= t0 the
/// multiplicity of x depends only on x mod period.
struct ResiduePattern {
    Rational period;
    Rational t0;
    std::map<Rational, long> counts;  // residue in [0, period) -> multiplicity
};

ResiduePattern residue_pattern(const GenMultiset& R);

struct AEVerdict {
    bool equal_ae = false;
    std::string witness;  // agreement bound or mismatching residue/value
    std::optional<Rational> witness_value;
};

/// Decides whether S(R1) and S(R2) agree up to finitely many elements, by
/// exact residue-pattern comparison groupwise over commensurability classes.
AEVerdict almost_equal(const GenMultiset& R1, const GenMultiset& R2);

/// The generated multisets admit a close almost bijection exactly when they
/// are almost equal; this is the decision procedure for that relation.
AEVerdict cab_equivalent(const GenMultiset& R1, const GenMultiset& R2);

struct RefinementResult {
    std::vector<APPair> pieces;        // (ma, b + ia), i = 0..m-1
    std::vector<Rational> dropped_head;  // elements only in the unrefined set
};

RefinementResult refinement(const APPair& p, long m);

/// Refined pieces of members of R that tile S({target}) exactly once, if any.
std::optional<std::vector<APPair>> find_refinement_decomposition(
    const APPair& target, const GenMultiset& R);

bool is_covering(const GenMultiset& R);
bool is_exact_covering(const GenMultiset& R);
bool is_distinct_covering(const GenMultiset& R);

/// One merge event: children of equal modulus collapse into parent.
struct MergeStep {
    APPair parent;
    std::vector<APPair> children;
};

/// Split tree for exact covering systems reachable from {(1,0)} by repeated
/// splitting; steps are listed from the leaves upward.
struct SplitTree {
    std::vector<MergeStep> merges;
};

std::optional<SplitTree> is_natural_exact(const GenMultiset& R);

/// True when every pair satisfies a ± 4b not in 4aZ.
bool anomaly_check(const GenMultiset& R);

struct SignReduction {
    std::optional<std::vector<int>> signs;  // ±1 per pair of R
    bool hypothesis_ok = true;
};

/// Searches sign flips of the offsets of R making S({(a,b)}) almost equal to
/// the flipped set.  If the offset hypothesis fails the search still runs but
/// is flagged heuristic.
SignReduction sign_reduction(const Rational& a, const Rational& b,
                             const GenMultiset& R);

/// One slot of a classified family: modulus and offset eps*beta + c with a
/// free offset beta, or a plain rational offset when the family only exists
/// at the pinned value beta = 1/4.
struct FamilySlot {
    Rational a;
    int eps = 1;
    Rational c;
};

struct ClassifyFamily {
    std::vector<FamilySlot> slots;
    bool pinned_quarter = false;  // valid only for beta = 1/4
    std::string str() const;
};

/// Integer tuples p_1 <= ... <= p_k with Σ 2/p_j = 1.
std::vector<std::vector<long>> unit_fraction_tuples(int k);

/// All ways a single progression pair (with free offset) generates the same
/// doubled-reflected multiset as k2 pairs, normalized to leading modulus 1.
std::vector<ClassifyFamily> classify_vs_single(int k2);

struct CommClass {
    std::string key;  // representative unit set
    std::vector<APPair> from_r1;
    std::vector<APPair> from_r2;
};

std::vector<CommClass> commensurability_partition(const GenMultiset& R1,
                                                  const GenMultiset& R2);

}  // namespace steklov
