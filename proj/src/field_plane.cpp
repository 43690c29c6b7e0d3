#include "fpinc/field_plane.hpp"

#include <algorithm>

namespace fpinc {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                            23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is exact for every n < 2^64.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                            23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PlaneContext::PlaneContext(std::uint64_t p) : p_(p) {
    FPINC_REQUIRE(p >= 2, "modulus must be at least 2");
    FPINC_REQUIRE(p < (1ULL << 61), "modulus must be below 2^61");
    FPINC_REQUIRE(is_prime_u64(p), "modulus " + std::to_string(p) + " is not prime");
}

Fe PlaneContext::pow(Fe base, std::uint64_t e) const { return powmod(base, e, p_); }

Fe PlaneContext::inv(Fe x) const {
    FPINC_REQUIRE(x != 0, "inverse of zero is undefined");
    // Fermat: x^(p-2).
    return powmod(x, p_ - 2, p_);
}

ProjMap ProjMap::identity() {
    ProjMap r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = 1;
    return r;
}

ProjPoint canonical_proj(const PlaneContext& ctx, Fe X, Fe Y, Fe Z) {
    FPINC_REQUIRE(X != 0 || Y != 0 || Z != 0, "zero triple is not a projective point");
    Fe s;
    if (Z != 0) s = ctx.inv(Z);
    else if (Y != 0) s = ctx.inv(Y);
    else s = ctx.inv(X);
    return ProjPoint{ctx.mul(X, s), ctx.mul(Y, s), ctx.mul(Z, s)};
}

ProjPoint lift(const AffinePoint& pt) { return ProjPoint{pt.x, pt.y, 1}; }

AffinePoint to_affine(const PlaneContext& ctx, const ProjPoint& pt) {
    FPINC_REQUIRE(pt.Z != 0, "point at infinity has no affine form");
    Fe s = ctx.inv(pt.Z);
    return AffinePoint{ctx.mul(pt.X, s), ctx.mul(pt.Y, s)};
}

AffLine canonical_line(const PlaneContext& ctx, Fe a, Fe b, Fe c) {
    FPINC_REQUIRE(a != 0 || b != 0, "line coefficients (a,b) must not both vanish");
    Fe s = (a != 0) ? ctx.inv(a) : ctx.inv(b);
    return AffLine{ctx.mul(a, s), ctx.mul(b, s), ctx.mul(c, s)};
}

AffLine line_through(const PlaneContext& ctx, const AffinePoint& p,
                     const AffinePoint& q) {
    FPINC_REQUIRE(p != q, "line through a pair requires two distinct points");
    // Normal (a, b) = (dy, -dx), then c fixed by passing through p.
    Fe dx = ctx.sub(q.x, p.x);
    Fe dy = ctx.sub(q.y, p.y);
    Fe a = dy;
    Fe b = ctx.neg(dx);
    Fe c = ctx.add(ctx.mul(a, p.x), ctx.mul(b, p.y));
    return canonical_line(ctx, a, b, c);
}

AffLine line_through_apex(const PlaneContext& ctx, const ProjPoint& apex,
                          const AffinePoint& q) {
    if (!apex.at_infinity()) return line_through(ctx, to_affine(ctx, apex), q);
    // Direction (u, v): normal (v, -u).
    Fe a = apex.Y;
    Fe b = ctx.neg(apex.X);
    Fe c = ctx.add(ctx.mul(a, q.x), ctx.mul(b, q.y));
    return canonical_line(ctx, a, b, c);
}

bool incident(const PlaneContext& ctx, const AffinePoint& pt, const AffLine& l) {
    return ctx.add(ctx.mul(l.a, pt.x), ctx.mul(l.b, pt.y)) == l.c;
}

bool proj_incident(const PlaneContext& ctx, const ProjPoint& pt,
                   const std::array<Fe, 3>& line) {
    Fe s = ctx.add(ctx.add(ctx.mul(line[0], pt.X), ctx.mul(line[1], pt.Y)),
                   ctx.mul(line[2], pt.Z));
    return s == 0;
}

std::array<Fe, 3> homogenize_line(const PlaneContext& ctx, const AffLine& l) {
    return {l.a, l.b, ctx.neg(l.c)};
}

std::array<Fe, 3> proj_line_through(const PlaneContext& ctx, const ProjPoint& p,
                                    const ProjPoint& q) {
    std::array<Fe, 3> r{ctx.sub(ctx.mul(p.Y, q.Z), ctx.mul(p.Z, q.Y)),
                        ctx.sub(ctx.mul(p.Z, q.X), ctx.mul(p.X, q.Z)),
                        ctx.sub(ctx.mul(p.X, q.Y), ctx.mul(p.Y, q.X))};
    FPINC_REQUIRE(r[0] != 0 || r[1] != 0 || r[2] != 0,
                  "projective line requires two distinct points");
    return r;
}

Fe det3(const PlaneContext& ctx, const ProjMap& mm) {
    const auto& m = mm.m;
    Fe t0 = ctx.mul(m[0][0], ctx.sub(ctx.mul(m[1][1], m[2][2]), ctx.mul(m[1][2], m[2][1])));
    Fe t1 = ctx.mul(m[0][1], ctx.sub(ctx.mul(m[1][0], m[2][2]), ctx.mul(m[1][2], m[2][0])));
    Fe t2 = ctx.mul(m[0][2], ctx.sub(ctx.mul(m[1][0], m[2][1]), ctx.mul(m[1][1], m[2][0])));
    return ctx.add(ctx.sub(t0, t1), t2);
}

bool collinear(const PlaneContext& ctx, const ProjPoint& p, const ProjPoint& q,
               const ProjPoint& r) {
    ProjMap m;
    m.m = {{{p.X, q.X, r.X}, {p.Y, q.Y, r.Y}, {p.Z, q.Z, r.Z}}};
    return det3(ctx, m) == 0;
}

ProjMap inverse(const PlaneContext& ctx, const ProjMap& mm) {
    Fe d = det3(ctx, mm);
    FPINC_REQUIRE(d != 0, "matrix is singular");
    const auto& m = mm.m;
    Fe di = ctx.inv(d);
    ProjMap r;
    auto cof = [&](int r0, int r1, int c0, int c1) {
        return ctx.sub(ctx.mul(m[r0][c0], m[r1][c1]), ctx.mul(m[r0][c1], m[r1][c0]));
    };
    r.m[0][0] = ctx.mul(di, cof(1, 2, 1, 2));
    r.m[0][1] = ctx.mul(di, ctx.neg(cof(0, 2, 1, 2)));
    r.m[0][2] = ctx.mul(di, cof(0, 1, 1, 2));
    r.m[1][0] = ctx.mul(di, ctx.neg(cof(1, 2, 0, 2)));
    r.m[1][1] = ctx.mul(di, cof(0, 2, 0, 2));
    r.m[1][2] = ctx.mul(di, ctx.neg(cof(0, 1, 0, 2)));
    r.m[2][0] = ctx.mul(di, cof(1, 2, 0, 1));
    r.m[2][1] = ctx.mul(di, ctx.neg(cof(0, 2, 0, 1)));
    r.m[2][2] = ctx.mul(di, cof(0, 1, 0, 1));
    return r;
}

ProjMap transpose(const ProjMap& m) {
    ProjMap r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = m.m[j][i];
    return r;
}

ProjMap standard_frame_map(const PlaneContext& ctx, const ProjPoint& origin,
                           const ProjPoint& to_e1, const ProjPoint& to_e2) {
    ProjMap cols;
    cols.m = {{{to_e1.X, to_e2.X, origin.X},
               {to_e1.Y, to_e2.Y, origin.Y},
               {to_e1.Z, to_e2.Z, origin.Z}}};
    if (det3(ctx, cols) == 0)
        throw DataError("frame points are collinear");
    return inverse(ctx, cols);
}

ProjPoint apply_map(const PlaneContext& ctx, const ProjMap& m, const ProjPoint& pt) {
    Fe out[3];
    for (int i = 0; i < 3; ++i) {
        out[i] = ctx.add(ctx.add(ctx.mul(m.m[i][0], pt.X), ctx.mul(m.m[i][1], pt.Y)),
                         ctx.mul(m.m[i][2], pt.Z));
    }
    return canonical_proj(ctx, out[0], out[1], out[2]);
}

std::array<Fe, 3> apply_map_line(const PlaneContext& ctx, const ProjMap& m,
                                 const std::array<Fe, 3>& line) {
    ProjMap it = transpose(inverse(ctx, m));
    std::array<Fe, 3> r;
    for (int i = 0; i < 3; ++i) {
        r[i] = ctx.add(ctx.add(ctx.mul(it.m[i][0], line[0]), ctx.mul(it.m[i][1], line[1])),
                       ctx.mul(it.m[i][2], line[2]));
    }
    return r;
}

std::string to_string(const AffinePoint& pt) {
    return "(" + std::to_string(pt.x) + "," + std::to_string(pt.y) + ")";
}

std::string to_string(const ProjPoint& pt) {
    return "[" + std::to_string(pt.X) + ":" + std::to_string(pt.Y) + ":" +
           std::to_string(pt.Z) + "]";
}

std::string to_string(const AffLine& l) {
    return "<" + std::to_string(l.a) + "," + std::to_string(l.b) + "," +
           std::to_string(l.c) + ">";
}

} // namespace fpinc
