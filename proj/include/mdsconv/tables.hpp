#pragma once

#include <string>
#include <vector>

#include "mdsconv/code.hpp"

namespace mdsconv {

// One bundled code record: field, block length, claimed free distance (with
// exactness flag), coefficient log rows and the published rareness string.
struct TableEntry {
    int m = 0;
    std::uint32_t poly = 0;
    int n = 0;
    int delta = 0;
    bool exact = false;
    std::string rareness;
    std::vector<std::vector<int>> log_rows;

    Code to_code() const;
    std::string name() const;  // e.g. "gf(2^4) n=3"
    // the large high-degree-field entries cost minutes to verify
    bool slow() const { return m >= 10; }
};

// The compiled-in copy of data/tables.txt.
const char* bundled_tables_text();
const std::vector<TableEntry>& bundled_tables();

std::vector<TableEntry> parse_tables(const std::string& text);

}  // namespace mdsconv
