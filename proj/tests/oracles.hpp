// Brute-force reference implementations for the golden tests. Everything here
// is written against plain integers with its own modular arithmetic so a bug
// in the library cannot hide in its oracle.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 omod(u128 x, u64 p) { return static_cast<u64>(x % p); }
inline u64 oadd(u64 a, u64 b, u64 p) { return omod(u128(a) + b, p); }
inline u64 osub(u64 a, u64 b, u64 p) { return omod(u128(a) + p - (b % p), p); }
inline u64 omul(u64 a, u64 b, u64 p) { return omod(u128(a) * b, p); }

inline u64 opow(u64 b, u64 e, u64 p) {
    u64 r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = omul(r, b, p);
        b = omul(b, b, p);
        e >>= 1;
    }
    return r;
}

inline u64 oinv(u64 a, u64 p) {
    if (a % p == 0) throw std::runtime_error("oracle inverse of zero");
    return opow(a, p - 2, p);  // Fermat, p prime
}

using Pt = std::pair<u64, u64>;
using Ln = std::tuple<u64, u64, u64>;  // a*x + b*y = c

inline bool on_line(const Pt& q, const Ln& l, u64 p) {
    auto [a, b, c] = l;
    return oadd(omul(a, q.first, p), omul(b, q.second, p), p) == c % p;
}

// Plain pair loop.
inline u64 incidences(const std::vector<Pt>& pts, const std::vector<Ln>& lns,
                      u64 p) {
    u64 total = 0;
    for (const Pt& q : pts)
        for (const Ln& l : lns)
            if (on_line(q, l, p)) ++total;
    return total;
}

// Canonical line through two distinct points: first nonzero of (a, b) is 1.
inline Ln line_through(const Pt& P, const Pt& Q, u64 p) {
    if (P == Q) throw std::runtime_error("oracle line through equal points");
    if (P.first == Q.first) return Ln{1, 0, P.first};  // vertical x = const
    u64 dx = osub(Q.first, P.first, p);
    u64 s = omul(osub(Q.second, P.second, p), oinv(dx, p), p);  // slope
    u64 t = osub(P.second, omul(s, P.first, p), p);             // intercept
    if (s == 0) return Ln{0, 1, t};  // horizontal y = t
    // y = s x + t  <=>  (p - s) x + y = t, scaled so a = 1
    u64 a = osub(0, s, p);
    u64 inva = oinv(a, p);
    return Ln{1, inva, omul(t, inva, p)};
}

inline std::set<Ln> lines_determined(const std::vector<Pt>& pts, u64 p) {
    std::set<Ln> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            out.insert(line_through(pts[i], pts[j], p));
    return out;
}

inline u64 count_on_line(const std::vector<Pt>& pts, const Ln& l, u64 p) {
    u64 n = 0;
    for (const Pt& q : pts)
        if (on_line(q, l, p)) ++n;
    return n;
}

// Ordered quadruples (a,b,c,d) in A^4 with ab = cd.
inline u64 mult_energy(const std::vector<u64>& A, u64 p) {
    u64 e = 0;
    for (u64 a : A)
        for (u64 b : A)
            for (u64 c : A)
                for (u64 d : A)
                    if (omul(a, b, p) == omul(c, d, p)) ++e;
    return e;
}

inline std::set<u64> diff_set(const std::vector<u64>& A, const std::vector<u64>& B,
                              u64 p) {
    std::set<u64> out;
    for (u64 a : A)
        for (u64 b : B) out.insert(osub(a, b, p));
    return out;
}

// Ratio set over edges with nonzero second coordinate; also counts skips.
inline std::pair<std::set<u64>, u64> ratio_set(const std::vector<Pt>& edges,
                                               u64 p) {
    std::set<u64> out;
    u64 skipped = 0;
    for (const Pt& e : edges) {
        if (e.second % p == 0) {
            ++skipped;
        } else {
            out.insert(omul(e.first, oinv(e.second, p), p));
        }
    }
    return {out, skipped};
}

// Distinct canonical lines through a fixed affine point meeting a point set:
// the minimal number of pencil lines covering S from q (q outside S).
inline u64 apex_cover_size(const Pt& q, const std::vector<Pt>& S, u64 p) {
    std::set<Ln> lines;
    for (const Pt& s : S) lines.insert(line_through(q, s, p));
    return lines.size();
}

} // namespace oracle
