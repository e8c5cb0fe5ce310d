#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "twistlaw/hyperbolic.hpp"

namespace twistlaw::flat {

// Permutation of {0..n-1} stored as an image table.
using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm inverse(const Perm& p);
// (f o g)(i) = f(g(i)).
Perm compose(const Perm& f, const Perm& g);
// p^k for arbitrary (possibly huge, possibly negative) k; exponents reduce per cycle.
Perm power(const Perm& p, const mpz_class& k);
std::vector<std::vector<int>> cycles(const Perm& p);

// Square-tiled surface: n unit squares, square h(i) glued to the right of i and
// v(i) glued on top of i. Squares are 0-based internally, 1-based in text.
struct Origami {
    int n = 1;
    Perm h{0};
    Perm v{0};

    static Origami torus() { return {}; }
    friend bool operator==(const Origami&, const Origami&) = default;
};

// "n; (cycles of h); (cycles of v)", e.g. "3; (1 2); (1 3)", or the keyword "torus".
// Throws ParseError naming the offending token; does not check connectivity.
Origami parse_origami(std::string_view text);
std::string format_origami(const Origami& o);

// Throws InvalidArgument listing the orbits when <h, v> is not transitive.
void validate(const Origami& o);

// Commutator h v h^-1 v^-1; the bottom-left corner of square j lies at the vertex
// given by the cycle containing j, with cone angle 2*pi*(cycle length).
Perm commutator(const Origami& o);
// Zero orders (cycle length - 1, zeros dropped), sorted descending.
std::vector<int> stratum(const Origami& o);
int genus(const Origami& o);

// Action of SL(2,Z) pushing the flat structure forward: direction d of o becomes
// m d on m.o.
struct IntMatrix {
    long a = 1, b = 0, c = 0, d = 1;
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};
Origami act_T(const Origami& o, const mpz_class& k); // [[1,k],[0,1]]
Origami act_L(const Origami& o, const mpz_class& k); // [[1,0],[k,1]]
Origami act_minus_identity(const Origami& o);
// Throws InvalidArgument unless det m = 1.
Origami act(const Origami& o, const IntMatrix& m);

// Re-marked origami whose horizontal direction is the direction (p,q) of o.
Origami horizontal_for(const Origami& o, const mpz_class& p, const mpz_class& q);

struct Cylinder {
    mpz_class p = 1, q = 0;  // primitive direction of the core curve
    long circumference = 1;  // in square units along the direction
    long height = 1;
    double area_fraction = 1.0;
    std::string core_label;
};

// Horizontal cylinders of o, as (circumference, height) pairs sorted by
// decreasing area, then circumference.
std::vector<Cylinder> horizontal_cylinders(const Origami& o);

// Maximal cylinders in the primitive direction (p,q). Throws InvalidArgument when
// gcd(p,q) != 1.
std::vector<Cylinder> cylinder_decomposition(const Origami& o, const mpz_class& p,
                                             const mpz_class& q);

// Squared unit-area flat length circ^2 |q z - p|^2 / (n Im z) of a core with
// direction (p,q) at the disc point z.
double flat_length_sq(const Origami& o, long p, long q, long circ, hyp::UhpPoint z);

// Half the shortest squared core length over the base point i and its integer
// translates i-3..i+3. Thin parts with eps below this avoid the thick set.
double eps_zero(const Origami& o);
// Largest eps for which the thin parts still miss the base point i (2 * eps_zero).
double eps_thick_bound(const Origami& o);

// One horoball per cylinder, for every primitive direction (p,q) with 0 <= q <= Q
// whose tangency p/q lies in [x_lo, x_hi] (q = 0: the point at infinity). Throws
// InvalidArgument for eps outside (0, eps_thick_bound].
std::vector<hyp::Horoball> horoball_family(const Origami& o, double eps, long Q,
                                           double x_lo = -1.0, double x_hi = 1.0);

// Canonical relabelling: the lexicographically least (h, v) over all relabellings
// obtained by breadth-first numbering from some square.
Origami canonical_form(const Origami& o);
// SL(2,Z) orbit of canonical forms, starting with canonical_form(o).
std::vector<Origami> sl2z_orbit(const Origami& o, std::size_t max_size = 100000);

// The SL(2,Z) orbit with the generator actions tabulated on indices, so that the
// cylinders of a re-marking cost index arithmetic instead of permutation algebra.
// Element 0 is canonical_form(o).
class OrbitTable {
public:
    explicit OrbitTable(const Origami& o, std::size_t max_size = 100000);

    std::size_t size() const { return elements_.size(); }
    int squares() const { return elements_[0].n; }
    const Origami& element(std::size_t e) const { return elements_[e]; }

    std::size_t apply_T(std::size_t e, const mpz_class& k) const;
    std::size_t apply_L(std::size_t e, const mpz_class& k) const;
    std::size_t apply_minus_identity(std::size_t e) const { return minus_[e]; }

    // Element whose horizontal direction is the direction (p,q) of element e.
    std::size_t horizontal_for(std::size_t e, const mpz_class& p, const mpz_class& q) const;

    const std::vector<Cylinder>& horizontal_cylinders(std::size_t e) const { return horizontal_[e]; }
    // Cylinders of element e in direction (p,q), labelled by direction.
    std::vector<Cylinder> cylinders(std::size_t e, const mpz_class& p, const mpz_class& q) const;

private:
    struct Cycles {
        std::vector<std::vector<std::size_t>> cycles;
        std::vector<std::size_t> cycle_of;
        std::vector<std::size_t> position;
    };
    static Cycles tabulate(const std::vector<std::size_t>& next);
    static std::size_t jump(const Cycles& c, std::size_t e, const mpz_class& k);

    std::vector<Origami> elements_;
    std::vector<std::size_t> minus_;
    Cycles t_, l_;
    std::vector<std::vector<Cylinder>> horizontal_;
};

} // namespace twistlaw::flat
