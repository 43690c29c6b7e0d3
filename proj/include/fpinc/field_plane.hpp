#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "fpinc/errors.hpp"

namespace fpinc {

// Field elements are plain machine words, always kept reduced mod p.
using Fe = std::uint64_t;

// The prime plane F_p^2. Holds p and does all modular arithmetic; products go
// through a 128-bit intermediate, so any prime below 2^61 is safe.
class PlaneContext {
public:
    explicit PlaneContext(std::uint64_t p);

    std::uint64_t p() const { return p_; }

    Fe reduce(std::uint64_t x) const { return x % p_; }
    Fe add(Fe a, Fe b) const {
        Fe s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Fe sub(Fe a, Fe b) const { return a >= b ? a - b : a + p_ - b; }
    Fe neg(Fe a) const { return a == 0 ? 0 : p_ - a; }
    Fe mul(Fe a, Fe b) const {
        return static_cast<Fe>(static_cast<unsigned __int128>(a) * b % p_);
    }
    Fe pow(Fe base, std::uint64_t e) const;
    // Multiplicative inverse; DataError on x = 0.
    Fe inv(Fe x) const;
    Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }

    bool operator==(const PlaneContext& o) const { return p_ == o.p_; }

private:
    std::uint64_t p_;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

struct AffinePoint {
    Fe x = 0;
    Fe y = 0;
    auto operator<=>(const AffinePoint&) const = default;
};

// Homogeneous coordinates, canonical: last nonzero coordinate equals 1, so
// affine points embed unchanged as (x, y, 1).
struct ProjPoint {
    Fe X = 0;
    Fe Y = 0;
    Fe Z = 0;
    auto operator<=>(const ProjPoint&) const = default;
    bool at_infinity() const { return Z == 0; }
};

// a*x + b*y = c with the first nonzero of (a, b) scaled to 1. This gives one
// representative per line and exactly p^2 + p canonical lines in the plane.
struct AffLine {
    Fe a = 0;
    Fe b = 0;
    Fe c = 0;
    auto operator<=>(const AffLine&) const = default;
};

// Invertible 3x3 matrix acting on homogeneous coordinates.
struct ProjMap {
    std::array<std::array<Fe, 3>, 3> m{};
    static ProjMap identity();
};

ProjPoint canonical_proj(const PlaneContext& ctx, Fe X, Fe Y, Fe Z);
ProjPoint lift(const AffinePoint& pt);                       // (x, y, 1)
AffinePoint to_affine(const PlaneContext& ctx, const ProjPoint& pt);

AffLine canonical_line(const PlaneContext& ctx, Fe a, Fe b, Fe c);

// The line determined by two distinct points; DataError if p == q.
AffLine line_through(const PlaneContext& ctx, const AffinePoint& p,
                     const AffinePoint& q);

// Line through a (possibly infinite) apex and an affine point. An infinite
// apex [u:v:0] yields the line through q with direction (u, v).
AffLine line_through_apex(const PlaneContext& ctx, const ProjPoint& apex,
                          const AffinePoint& q);

bool incident(const PlaneContext& ctx, const AffinePoint& pt, const AffLine& l);
bool proj_incident(const PlaneContext& ctx, const ProjPoint& pt,
                   const std::array<Fe, 3>& line);

// Homogeneous coefficients (u, v, w) with u*X + v*Y + w*Z = 0 of the affine
// line a*x + b*y = c.
std::array<Fe, 3> homogenize_line(const PlaneContext& ctx, const AffLine& l);

// Projective line through two distinct projective points (cross product).
std::array<Fe, 3> proj_line_through(const PlaneContext& ctx, const ProjPoint& p,
                                    const ProjPoint& q);

Fe det3(const PlaneContext& ctx, const ProjMap& m);
bool collinear(const PlaneContext& ctx, const ProjPoint& p, const ProjPoint& q,
               const ProjPoint& r);

// Inverse map (up to scalar: adjugate); DataError if singular.
ProjMap inverse(const PlaneContext& ctx, const ProjMap& m);
ProjMap transpose(const ProjMap& m);

// The projective transform sending `to_e1` to [1:0:0], `to_e2` to [0:1:0] and
// `origin` to [0:0:1]: the inverse of the matrix whose columns are the three
// homogeneous triples. DataError if the points are collinear.
ProjMap standard_frame_map(const PlaneContext& ctx, const ProjPoint& origin,
                           const ProjPoint& to_e1, const ProjPoint& to_e2);

ProjPoint apply_map(const PlaneContext& ctx, const ProjMap& m, const ProjPoint& pt);

// Image of a line under the map acting on points: coefficients transform by
// the inverse transpose.
std::array<Fe, 3> apply_map_line(const PlaneContext& ctx, const ProjMap& m,
                                 const std::array<Fe, 3>& line);

std::string to_string(const AffinePoint& pt);
std::string to_string(const ProjPoint& pt);
std::string to_string(const AffLine& l);

} // namespace fpinc
