#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdsconv/code.hpp"

namespace mdsconv {

struct SymbolRef {
    int block = 0;
    int pos = 0;  // 0..n-1; pos = n-1 is the parity symbol
    auto operator<=>(const SymbolRef&) const = default;
};

// A systematically encoded packet stream: block t carries k information
// symbols verbatim plus one parity symbol. Every length-(l+1)n prefix has
// zero syndrome under the truncated parity check matrix.
struct Stream {
    Code code;
    int blocks = 0;
    std::vector<Fe> symbols;  // blocks * n, block-major

    Fe at(int block, int pos) const
    {
        return symbols[static_cast<std::size_t>(block) * code.n() + pos];
    }
};

// info holds blocks*k information symbols, block-major.
Stream encode_stream(const Code& code, const std::vector<Fe>& info);

// Fixed MDS prefix (degrees 0..D) plus seeded random nonzero coefficient
// rows for higher degrees; the prefix is untouched, so the initial column
// distances are those of the prefix whatever the tail.
class HybridCode {
public:
    HybridCode(Code prefix, std::uint64_t seed, int extra_degrees);

    const Code& prefix() const { return prefix_; }
    const Code& full() const { return full_; }
    int extra_degrees() const { return extra_; }
    std::uint64_t seed() const { return seed_; }

private:
    Code prefix_;
    Code full_;
    int extra_;
    std::uint64_t seed_;
};

HybridCode hybrid_extend(const Code& prefix, std::uint64_t seed, int degrees);

Stream encode_stream(const HybridCode& hybrid, const std::vector<Fe>& info);

struct Recovery {
    SymbolRef sym;
    int at_block = 0;  // block index whose syndrome made the value unique
    Fe value = 0;
};

struct ErasureTrace {
    std::vector<SymbolRef> erased;
    std::vector<Recovery> recovered;  // in commit order
    std::vector<SymbolRef> unrecovered;

    bool fully_recovered() const { return unrecovered.empty(); }
    int recovered_at(const SymbolRef& s) const;  // -1 when not recovered
};

// Sequential sliding-window solver: at each arriving block the new syndrome
// row is reduced against the committed pivots, and every uniquely determined
// unknown is committed with the current block recorded as its recovery time.
// Unknowns older than `window` blocks are abandoned (reported unrecovered),
// never stalled on. window <= 0 picks the default of D+2+8 blocks.
ErasureTrace decode_erasures(const Stream& s, const std::vector<SymbolRef>& erased,
                             int window = 0);

struct LossModel {
    enum class Kind { iid, gilbert } kind = Kind::iid;
    double p = 0;                       // iid loss rate
    double mean_good = 1, mean_bad = 1;  // gilbert mean run lengths

    static LossModel make_iid(double p) { return {Kind::iid, p, 0, 0}; }
    static LossModel make_gilbert(double good_run, double bad_run)
    {
        return {Kind::gilbert, 0, good_run, bad_run};
    }
    std::string describe() const;
};

struct SimStats {
    std::uint64_t blocks = 0;
    std::uint64_t info_total = 0;
    std::uint64_t delivered = 0;  // information symbols that arrived intact
    std::uint64_t erased_info = 0;
    std::uint64_t recovered_info = 0;
    std::uint64_t unrecovered_info = 0;
    int delay_p50 = 0, delay_p95 = 0, delay_p99 = 0, delay_max = 0;

    static std::string csv_header();
    std::string csv_row(std::uint64_t seed, const LossModel& loss) const;
};

SimStats simulate(const Code& code, const LossModel& loss, std::uint64_t blocks,
                  std::uint64_t seed, int window = 0);

}  // namespace mdsconv
