#include "mdsconv/gf.hpp"

namespace mdsconv {

Field::Field(int m, std::uint32_t poly_mask) : m_(m), poly_(poly_mask)
{
    if (m < 1 || m > 16) throw BadDegree("extension degree must be in 1..16");
    q_ = 1u << m;
    if ((poly_mask >> m) != 1u)
        throw NotPrimitive("polynomial mask must have degree exactly m");
    if ((poly_mask & 1u) == 0)
        throw NotPrimitive("primitive polynomials have a nonzero constant term");

    std::uint32_t ord = q_ - 1;
    exp_.assign(2 * ord, 0);
    log_.assign(q_, -1);

    std::uint32_t cur = 1;
    for (std::uint32_t i = 0; i < ord; ++i) {
        if (log_[cur] != -1)
            throw NotPrimitive("x does not generate the unit group under this modulus");
        exp_[i] = static_cast<Fe>(cur);
        log_[cur] = static_cast<std::int32_t>(i);
        cur <<= 1;
        if (cur & q_) cur ^= poly_mask;
    }
    if (cur != 1)
        throw NotPrimitive("x has multiplicative order below 2^m-1");
    for (std::uint32_t i = 0; i < ord; ++i) exp_[ord + i] = exp_[i];
}

Fe Field::pow(Fe a, long long e) const
{
    if (a == 0) {
        if (e == 0) return 1;
        if (e < 0) throw ZeroInverse("negative power of zero");
        return 0;
    }
    long long ord = order();
    long long r = e % ord;
    if (r < 0) r += ord;
    long long l = (static_cast<long long>(log_[a]) * r) % ord;
    return exp_[static_cast<std::uint32_t>(l)];
}

Fe Field::trace(Fe a) const
{
    Fe acc = 0;
    Fe cur = a;
    for (int i = 0; i < m_; ++i) {
        acc ^= cur;
        cur = mul(cur, cur);
    }
    return acc;
}

std::uint32_t Field::default_poly(int m)
{
    switch (m) {
        case 1: return 0x3;       // 1 + x
        case 2: return 0x7;       // 1 + x + x^2
        case 3: return 0xB;       // 1 + x + x^3
        case 4: return 0x13;      // 1 + x + x^4
        case 5: return 0x25;      // 1 + x^2 + x^5
        case 6: return 0x43;      // 1 + x + x^6
        case 7: return 0x89;      // 1 + x^3 + x^7
        case 8: return 0x11D;     // 1 + x^2 + x^3 + x^4 + x^8
        case 9: return 0x211;     // 1 + x^4 + x^9
        case 10: return 0x409;    // 1 + x^3 + x^10
        case 11: return 0x805;    // 1 + x^2 + x^11
        case 12: return 0x1099;   // 1 + x^3 + x^4 + x^7 + x^12
        case 13: return 0x201B;   // 1 + x + x^3 + x^4 + x^13
        case 14: return 0x5803;   // 1 + x + x^11 + x^12 + x^14
        case 15: return 0x8003;   // 1 + x + x^15
        case 16: return 0x1100B;  // 1 + x + x^3 + x^12 + x^16
        default: throw BadDegree("no default polynomial for this degree");
    }
}

}  // namespace mdsconv
