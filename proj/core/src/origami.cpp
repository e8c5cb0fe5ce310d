#include "twistlaw/origami.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <map>
#include <sstream>

#include "twistlaw/error.hpp"

namespace twistlaw::flat {

Perm identity_perm(int n) {
    Perm p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm inverse(const Perm& p) {
    Perm r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    return r;
}

Perm compose(const Perm& f, const Perm& g) {
    Perm r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = f[static_cast<std::size_t>(g[i])];
    return r;
}

std::vector<std::vector<int>> cycles(const Perm& p) {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (seen[s]) continue;
        std::vector<int> cyc;
        for (int i = static_cast<int>(s); !seen[static_cast<std::size_t>(i)]; i = p[static_cast<std::size_t>(i)]) {
            seen[static_cast<std::size_t>(i)] = 1;
            cyc.push_back(i);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

Perm power(const Perm& p, const mpz_class& k) {
    Perm r(p.size());
    for (const auto& cyc : cycles(p)) {
        const unsigned long len = cyc.size();
        const unsigned long shift = mpz_fdiv_ui(k.get_mpz_t(), len);
        for (std::size_t i = 0; i < len; ++i)
            r[static_cast<std::size_t>(cyc[i])] = cyc[(i + shift) % len];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

Perm parse_cycles(const std::string& text, int n) {
    Perm p = identity_perm(n);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) return p;
    while (i < text.size()) {
        if (text[i] != '(') throw ParseError("expected '(' in cycle notation", text.substr(i));
        const std::size_t close = text.find(')', i);
        if (close == std::string::npos) throw ParseError("unterminated cycle", text.substr(i));
        const std::string body = text.substr(i + 1, close - i - 1);
        std::vector<int> cyc;
        std::string tok;
        std::istringstream in(body);
        while (in >> tok) {
            std::string item;
            std::istringstream parts(tok);
            while (std::getline(parts, item, ',')) {
                if (item.empty()) continue;
                std::size_t used_chars = 0;
                long val = 0;
                try {
                    val = std::stol(item, &used_chars);
                } catch (const std::exception&) {
                    throw ParseError("not an integer", item);
                }
                if (used_chars != item.size()) throw ParseError("not an integer", item);
                if (val < 1 || val > n)
                    throw ParseError("square index outside 1.." + std::to_string(n), item);
                const int idx = static_cast<int>(val - 1);
                if (used[static_cast<std::size_t>(idx)])
                    throw ParseError("square appears twice in one permutation", item);
                used[static_cast<std::size_t>(idx)] = 1;
                cyc.push_back(idx);
            }
        }
        for (std::size_t k = 0; k < cyc.size(); ++k)
            p[static_cast<std::size_t>(cyc[k])] = cyc[(k + 1) % cyc.size()];
        i = close + 1;
        skip_ws();
    }
    return p;
}

std::string format_cycles(const Perm& p) {
    std::string out;
    for (const auto& cyc : cycles(p)) {
        if (cyc.size() < 2) continue;
        out += '(';
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            if (k) out += ' ';
            out += std::to_string(cyc[k] + 1);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

} // namespace

Origami parse_origami(std::string_view text) {
    const std::string t = trim(text);
    if (t == "torus") return Origami::torus();
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t semi = t.find(';', start);
        fields.push_back(trim(std::string_view(t).substr(start, semi == std::string::npos ? std::string::npos : semi - start)));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (fields.size() != 3)
        throw ParseError("origami record must read 'n; h-cycles; v-cycles'", t);
    std::size_t used_chars = 0;
    long n = 0;
    try {
        n = std::stol(fields[0], &used_chars);
    } catch (const std::exception&) {
        throw ParseError("square count is not an integer", fields[0]);
    }
    if (used_chars != fields[0].size()) throw ParseError("square count is not an integer", fields[0]);
    if (n < 1 || n > 1000000) throw ParseError("square count out of range", fields[0]);
    Origami o;
    o.n = static_cast<int>(n);
    o.h = parse_cycles(fields[1], o.n);
    o.v = parse_cycles(fields[2], o.n);
    return o;
}

std::string format_origami(const Origami& o) {
    return std::to_string(o.n) + "; " + format_cycles(o.h) + "; " + format_cycles(o.v);
}

// ---------------------------------------------------------------------------
// Topology

void validate(const Origami& o) {
    const auto n = static_cast<std::size_t>(o.n);
    if (o.n < 1 || o.h.size() != n || o.v.size() != n)
        throw InvalidArgument("origami: permutation sizes do not match n");
    for (const Perm* p : {&o.h, &o.v}) {
        std::vector<char> hit(n, 0);
        for (int x : *p) {
            if (x < 0 || static_cast<std::size_t>(x) >= n || hit[static_cast<std::size_t>(x)])
                throw InvalidArgument("origami: gluing is not a permutation");
            hit[static_cast<std::size_t>(x)] = 1;
        }
    }
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> orbits;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        const int id = static_cast<int>(orbits.size());
        orbits.emplace_back();
        std::queue<int> todo;
        todo.push(static_cast<int>(s));
        comp[s] = id;
        while (!todo.empty()) {
            const int i = todo.front();
            todo.pop();
            orbits.back().push_back(i);
            for (int j : {o.h[static_cast<std::size_t>(i)], o.v[static_cast<std::size_t>(i)]}) {
                if (comp[static_cast<std::size_t>(j)] < 0) {
                    comp[static_cast<std::size_t>(j)] = id;
                    todo.push(j);
                }
            }
        }
    }
    if (orbits.size() > 1) {
        std::string msg = "origami is disconnected: " + std::to_string(orbits.size()) + " components";
        for (auto& orb : orbits) {
            std::sort(orb.begin(), orb.end());
            msg += " {";
            for (std::size_t k = 0; k < orb.size(); ++k) msg += (k ? " " : "") + std::to_string(orb[k] + 1);
            msg += "}";
        }
        throw InvalidArgument(msg);
    }
}

Perm commutator(const Origami& o) {
    return compose(o.h, compose(o.v, compose(inverse(o.h), inverse(o.v))));
}

std::vector<int> stratum(const Origami& o) {
    validate(o);
    std::vector<int> orders;
    for (const auto& cyc : cycles(commutator(o)))
        if (cyc.size() > 1) orders.push_back(static_cast<int>(cyc.size()) - 1);
    std::sort(orders.rbegin(), orders.rend());
    return orders;
}

int genus(const Origami& o) {
    const auto orders = stratum(o);
    return (std::accumulate(orders.begin(), orders.end(), 0) + 2) / 2;
}

// ---------------------------------------------------------------------------
// SL(2,Z) action

Origami act_T(const Origami& o, const mpz_class& k) {
    // The new vertical direction is the old direction (-k, 1).
    return {o.n, o.h, compose(power(o.h, -k), o.v)};
}

Origami act_L(const Origami& o, const mpz_class& k) {
    // The new horizontal direction is the old direction (1, -k).
    return {o.n, compose(power(o.v, -k), o.h), o.v};
}

Origami act_minus_identity(const Origami& o) {
    return {o.n, inverse(o.h), inverse(o.v)};
}

namespace {

enum class Op { T, L, MinusI };
struct Step {
    Op op;
    mpz_class k;
};

Origami apply_step(const Origami& o, const Step& s) {
    switch (s.op) {
    case Op::T: return act_T(o, s.k);
    case Op::L: return act_L(o, s.k);
    case Op::MinusI: return act_minus_identity(o);
    }
    return o;
}

// Word W (applied left to right) with W (p,q) = (1,0).
std::vector<Step> reduce_to_horizontal(mpz_class p, mpz_class q) {
    std::vector<Step> word;
    while (q != 0) {
        if (p == 0) {
            // (0, +-1) -> (1, q) -> (1, 0)
            const mpz_class s = q;
            word.push_back({Op::T, s});
            word.push_back({Op::L, -s});
            p = 1;
            q = 0;
            break;
        }
        if (abs(p) >= abs(q)) {
            mpz_class k;
            mpz_tdiv_q(k.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
            word.push_back({Op::T, -k});
            p -= k * q;
        } else {
            mpz_class k;
            mpz_tdiv_q(k.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
            word.push_back({Op::L, -k});
            q -= k * p;
        }
    }
    if (p == -1) word.push_back({Op::MinusI, 0});
    return word;
}

} // namespace

Origami act(const Origami& o, const IntMatrix& m) {
    if (m.a * m.d - m.b * m.c != 1) throw InvalidArgument("act: matrix must have determinant 1");
    // W m = [[1, b'], [0, 1]], so m = W^-1 T^b'.
    const auto word = reduce_to_horizontal(m.a, m.c);
    // Track W applied to the second column to read off b'.
    mpz_class b = m.b, d = m.d;
    for (const auto& s : word) {
        switch (s.op) {
        case Op::T: b += s.k * d; break;
        case Op::L: d += s.k * b; break;
        case Op::MinusI: b = -b; d = -d; break;
        }
    }
    Origami r = act_T(o, b);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        Step inv = *it;
        inv.k = -inv.k;
        r = apply_step(r, inv);
    }
    return r;
}

Origami horizontal_for(const Origami& o, const mpz_class& p, const mpz_class& q) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw InvalidArgument("direction (" + p.get_str() + "," + q.get_str() + ") is not primitive");
    Origami r = o;
    for (const auto& s : reduce_to_horizontal(p, q)) r = apply_step(r, s);
    return r;
}

// ---------------------------------------------------------------------------
// Cylinders

std::vector<Cylinder> horizontal_cylinders(const Origami& o) {
    const auto n = static_cast<std::size_t>(o.n);
    const auto strips = cycles(o.h);
    std::vector<int> strip_of(n);
    for (std::size_t s = 0; s < strips.size(); ++s)
        for (int i : strips[s]) strip_of[static_cast<std::size_t>(i)] = static_cast<int>(s);

    std::vector<char> singular(n, 0);
    for (const auto& cyc : cycles(commutator(o)))
        if (cyc.size() > 1)
            for (int j : cyc) singular[static_cast<std::size_t>(j)] = 1;

    std::vector<char> top_sing(strips.size(), 0), bottom_sing(strips.size(), 0);
    for (std::size_t s = 0; s < strips.size(); ++s)
        for (int i : strips[s]) {
            if (singular[static_cast<std::size_t>(i)]) bottom_sing[s] = 1;
            if (singular[static_cast<std::size_t>(o.v[static_cast<std::size_t>(i)])]) top_sing[s] = 1;
        }

    std::vector<Cylinder> out;
    auto emit = [&](long circ, long height) {
        Cylinder c;
        c.circumference = circ;
        c.height = height;
        c.area_fraction = static_cast<double>(circ * height) / static_cast<double>(o.n);
        out.push_back(c);
    };
    const bool any_singular = std::any_of(singular.begin(), singular.end(), [](char c) { return c != 0; });
    if (!any_singular) {
        // Unbranched cover of the torus: a single cylinder made of all strips.
        emit(static_cast<long>(strips[0].size()), static_cast<long>(strips.size()));
    } else {
        for (std::size_t s = 0; s < strips.size(); ++s) {
            if (!bottom_sing[s]) continue;
            long height = 1;
            std::size_t cur = s;
            while (!top_sing[cur]) {
                cur = static_cast<std::size_t>(strip_of[static_cast<std::size_t>(o.v[static_cast<std::size_t>(strips[cur][0])])]);
                ++height;
            }
            emit(static_cast<long>(strips[s].size()), height);
        }
    }
    std::sort(out.begin(), out.end(), [](const Cylinder& x, const Cylinder& y) {
        const long ax = x.circumference * x.height, ay = y.circumference * y.height;
        if (ax != ay) return ax > ay;
        return x.circumference > y.circumference;
    });
    for (std::size_t k = 0; k < out.size(); ++k) out[k].core_label = "1/0#" + std::to_string(k);
    return out;
}

std::vector<Cylinder> cylinder_decomposition(const Origami& o, const mpz_class& p, const mpz_class& q) {
    mpz_class pp = p, qq = q;
    if (qq < 0 || (qq == 0 && pp < 0)) {
        pp = -pp;
        qq = -qq;
    }
    auto cyls = horizontal_cylinders(horizontal_for(o, pp, qq));
    const std::string dir = pp.get_str() + "/" + qq.get_str();
    for (std::size_t k = 0; k < cyls.size(); ++k) {
        cyls[k].p = pp;
        cyls[k].q = qq;
        cyls[k].core_label = dir + "#" + std::to_string(k);
    }
    return cyls;
}

double flat_length_sq(const Origami& o, long p, long q, long circ, hyp::UhpPoint z) {
    if (!(z.y > 0.0) || !std::isfinite(z.x) || !std::isfinite(z.y))
        throw InvalidArgument("flat_length_sq: disc point must have positive imaginary part");
    if (circ < 1) throw InvalidArgument("flat_length_sq: circumference must be positive");
    const double re = static_cast<double>(q) * z.x - static_cast<double>(p);
    const double im = static_cast<double>(q) * z.y;
    const double c = static_cast<double>(circ);
    return c * c * (re * re + im * im) / (static_cast<double>(o.n) * z.y);
}

double eps_zero(const Origami& o) {
    validate(o);
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](long p, long q, double x) {
        if (std::gcd(p, q) != 1) return;
        long circ_min = std::numeric_limits<long>::max();
        for (const auto& c : cylinder_decomposition(o, p, q)) circ_min = std::min(circ_min, c.circumference);
        best = std::min(best, flat_length_sq(o, p, q, circ_min, {x, 1.0}));
    };
    for (int k = -3; k <= 3; ++k) {
        const double x = k;
        consider(1, 0, x);
        // l^2 >= q^2 / n and >= (q x - p)^2 / n
        for (long q = 1; static_cast<double>(q * q) < o.n * best; ++q) {
            const double reach = std::sqrt(o.n * best);
            const auto lo = static_cast<long>(std::floor(q * x - reach));
            const auto hi = static_cast<long>(std::ceil(q * x + reach));
            for (long p = lo; p <= hi; ++p) consider(p, q, x);
        }
    }
    return best / 2.0;
}

double eps_thick_bound(const Origami& o) { return 2.0 * eps_zero(o); }

std::vector<hyp::Horoball> horoball_family(const Origami& o, double eps, long Q, double x_lo, double x_hi) {
    const double bound = eps_thick_bound(o);
    if (!(eps > 0.0 && eps <= bound))
        throw InvalidArgument("horoball_family: eps must lie in (0, " + std::to_string(bound) + "]");
    if (Q < 0) throw InvalidArgument("horoball_family: denominator bound must be >= 0");
    if (!(x_lo <= x_hi)) throw InvalidArgument("horoball_family: empty tangency window");
    std::vector<hyp::Horoball> out;
    const double n = o.n;
    for (long q = 0; q <= Q; ++q) {
        long lo = 1, hi = 1;
        if (q > 0) {
            lo = static_cast<long>(std::ceil(x_lo * static_cast<double>(q)));
            hi = static_cast<long>(std::floor(x_hi * static_cast<double>(q)));
        }
        for (long p = lo; p <= hi; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const double qd = q == 0 ? 1.0 : static_cast<double>(q);
            const auto tangency = q == 0 ? hyp::BoundaryPoint::infinity()
                                         : hyp::BoundaryPoint::at(static_cast<double>(p) / qd);
            for (const auto& c : cylinder_decomposition(o, p, q)) {
                const double circ = static_cast<double>(c.circumference);
                out.push_back(hyp::Horoball::make(tangency, eps * n / (circ * circ * qd * qd),
                                                  c.area_fraction, c.core_label));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orbits

Origami canonical_form(const Origami& o) {
    validate(o);
    const auto n = static_cast<std::size_t>(o.n);
    Origami best;
    bool have = false;
    std::vector<int> label(n);
    std::queue<int> todo;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(label.begin(), label.end(), -1);
        int next = 0;
        label[s] = next++;
        todo.push(static_cast<int>(s));
        while (!todo.empty()) {
            const auto i = static_cast<std::size_t>(todo.front());
            todo.pop();
            for (int j : {o.h[i], o.v[i]}) {
                if (label[static_cast<std::size_t>(j)] < 0) {
                    label[static_cast<std::size_t>(j)] = next++;
                    todo.push(j);
                }
            }
        }
        Origami r{o.n, Perm(n), Perm(n)};
        for (std::size_t i = 0; i < n; ++i) {
            r.h[static_cast<std::size_t>(label[i])] = label[static_cast<std::size_t>(o.h[i])];
            r.v[static_cast<std::size_t>(label[i])] = label[static_cast<std::size_t>(o.v[i])];
        }
        if (!have || std::tie(r.h, r.v) < std::tie(best.h, best.v)) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

std::vector<Origami> sl2z_orbit(const Origami& o, std::size_t max_size) {
    const OrbitTable table(o, max_size);
    std::vector<Origami> out;
    out.reserve(table.size());
    for (std::size_t e = 0; e < table.size(); ++e) out.push_back(table.element(e));
    return out;
}

OrbitTable::OrbitTable(const Origami& o, std::size_t max_size) {
    std::map<std::pair<Perm, Perm>, std::size_t> index;
    auto intern = [&](Origami c) {
        auto [it, fresh] = index.try_emplace({c.h, c.v}, elements_.size());
        if (fresh) {
            if (elements_.size() >= max_size) throw InvalidArgument("orbit exceeds size limit");
            elements_.push_back(std::move(c));
        }
        return it->second;
    };
    intern(canonical_form(o));
    std::vector<std::size_t> t_next, l_next;
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        const std::size_t t = intern(canonical_form(act_T(elements_[k], 1)));
        const std::size_t l = intern(canonical_form(act_L(elements_[k], 1)));
        t_next.push_back(t);
        l_next.push_back(l);
    }
    for (const auto& e : elements_) {
        minus_.push_back(index.at({canonical_form(act_minus_identity(e)).h,
                                   canonical_form(act_minus_identity(e)).v}));
        horizontal_.push_back(flat::horizontal_cylinders(e));
    }
    t_ = tabulate(t_next);
    l_ = tabulate(l_next);
}

OrbitTable::Cycles OrbitTable::tabulate(const std::vector<std::size_t>& next) {
    Cycles c;
    c.cycle_of.assign(next.size(), next.size());
    c.position.assign(next.size(), 0);
    for (std::size_t s = 0; s < next.size(); ++s) {
        if (c.cycle_of[s] != next.size()) continue;
        std::vector<std::size_t> cyc;
        for (std::size_t e = s; c.cycle_of[e] == next.size(); e = next[e]) {
            c.cycle_of[e] = c.cycles.size();
            c.position[e] = cyc.size();
            cyc.push_back(e);
        }
        c.cycles.push_back(std::move(cyc));
    }
    return c;
}

std::size_t OrbitTable::jump(const Cycles& c, std::size_t e, const mpz_class& k) {
    const auto& cyc = c.cycles[c.cycle_of[e]];
    const unsigned long shift = mpz_fdiv_ui(k.get_mpz_t(), cyc.size());
    return cyc[(c.position[e] + shift) % cyc.size()];
}

std::size_t OrbitTable::apply_T(std::size_t e, const mpz_class& k) const { return jump(t_, e, k); }
std::size_t OrbitTable::apply_L(std::size_t e, const mpz_class& k) const { return jump(l_, e, k); }

std::size_t OrbitTable::horizontal_for(std::size_t e, const mpz_class& p, const mpz_class& q) const {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw InvalidArgument("direction (" + p.get_str() + "," + q.get_str() + ") is not primitive");
    for (const auto& s : reduce_to_horizontal(p, q)) {
        switch (s.op) {
        case Op::T: e = apply_T(e, s.k); break;
        case Op::L: e = apply_L(e, s.k); break;
        case Op::MinusI: e = apply_minus_identity(e); break;
        }
    }
    return e;
}

std::vector<Cylinder> OrbitTable::cylinders(std::size_t e, const mpz_class& p, const mpz_class& q) const {
    mpz_class pp = p, qq = q;
    if (qq < 0 || (qq == 0 && pp < 0)) {
        pp = -pp;
        qq = -qq;
    }
    auto cyls = horizontal_[horizontal_for(e, pp, qq)];
    const std::string dir = pp.get_str() + "/" + qq.get_str();
    for (std::size_t k = 0; k < cyls.size(); ++k) {
        cyls[k].p = pp;
        cyls[k].q = qq;
        cyls[k].core_label = dir + "#" + std::to_string(k);
    }
    return cyls;
}

} // namespace twistlaw::flat
