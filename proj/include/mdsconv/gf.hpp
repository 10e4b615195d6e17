#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mdsconv/errors.hpp"

namespace mdsconv {

// Field element in polynomial (bit-vector) representation, value < 2^m.
using Fe = std::uint16_t;

// GF(2^m) for 1 <= m <= 16, table driven. alpha is the residue class of x,
// which the constructor verifies to be primitive (multiplicative order 2^m-1).
// Immutable after construction; all operations are pure and thread safe.
class Field {
public:
    // poly_mask encodes the defining polynomial as a bit mask including the
    // x^m term, e.g. 1 + x + x^3 -> 0b1011.
    Field(int m, std::uint32_t poly_mask);

    // Default polynomials per degree (the ones the bundled tables assume).
    static std::uint32_t default_poly(int m);
    static Field with_default_poly(int m) { return Field(m, default_poly(m)); }
    static std::shared_ptr<const Field> make(int m)
    {
        return std::make_shared<const Field>(m, default_poly(m));
    }
    static std::shared_ptr<const Field> make(int m, std::uint32_t poly_mask)
    {
        return std::make_shared<const Field>(m, poly_mask);
    }

    int m() const { return m_; }
    std::uint32_t poly_mask() const { return poly_; }
    std::uint32_t size() const { return q_; }       // 2^m
    std::uint32_t order() const { return q_ - 1; }  // size of the unit group
    Fe alpha() const { return exp_[1 % order()]; }

    Fe add(Fe a, Fe b) const { return a ^ b; }

    Fe mul(Fe a, Fe b) const
    {
        if (a == 0 || b == 0) return 0;
        return exp_[static_cast<std::uint32_t>(log_[a]) + static_cast<std::uint32_t>(log_[b])];
    }

    Fe sqr(Fe a) const { return mul(a, a); }

    Fe inv(Fe a) const
    {
        if (a == 0) throw ZeroInverse("inverse of zero");
        return exp_[order() - static_cast<std::uint32_t>(log_[a])];
    }

    Fe div(Fe a, Fe b) const
    {
        if (b == 0) throw ZeroInverse("division by zero");
        if (a == 0) return 0;
        std::uint32_t d = static_cast<std::uint32_t>(log_[a]) + order() -
                          static_cast<std::uint32_t>(log_[b]);
        return exp_[d];
    }

    int log(Fe a) const
    {
        if (a == 0) throw LogOfZero("log of zero");
        return log_[a];
    }

    // alpha^i with i reduced mod 2^m-1 (negative i allowed).
    Fe exp(long long i) const
    {
        long long ord = order();
        long long r = i % ord;
        if (r < 0) r += ord;
        return exp_[static_cast<std::uint32_t>(r)];
    }

    Fe pow(Fe a, long long e) const;

    // Tr(x) = sum of x^(2^i), i = 0..m-1; always lands in {0, 1}.
    Fe trace(Fe a) const;

    std::span<const Fe> exp_table() const { return {exp_.data(), order()}; }
    std::span<const std::int32_t> log_table() const { return {log_.data(), log_.size()}; }

private:
    int m_;
    std::uint32_t poly_;
    std::uint32_t q_;
    std::vector<Fe> exp_;          // doubled so mul needs no reduction
    std::vector<std::int32_t> log_;  // log_[0] = -1
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace mdsconv
