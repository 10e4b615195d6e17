#include "mdsconv/tables.hpp"

#include <sstream>

#include "tables_data.hpp"

namespace mdsconv {

Code TableEntry::to_code() const
{
    return Code::from_log_rows(Field::make(m, poly), n, log_rows);
}

std::string TableEntry::name() const
{
    std::ostringstream out;
    out << "gf(2^" << m << ") n=" << n;
    return out.str();
}

const char* bundled_tables_text() { return kTablesText; }

std::vector<TableEntry> parse_tables(const std::string& text)
{
    std::vector<TableEntry> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    TableEntry cur;
    bool open = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("entry ", 0) == 0) {
            if (open) throw ParseError("entry without end", lineno, 1);
            cur = TableEntry{};
            std::istringstream hs(line.substr(6));
            std::string kv;
            while (hs >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw ParseError("expected key=value in entry line", lineno, 1);
                std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "m") {
                    cur.m = std::stoi(val);
                } else if (key == "poly") {
                    if (val.rfind("0b", 0) != 0)
                        throw ParseError("polynomial must use a 0b prefix", lineno, 1);
                    cur.poly = 0;
                    for (std::size_t i = 2; i < val.size(); ++i)
                        cur.poly = (cur.poly << 1) | static_cast<std::uint32_t>(val[i] - '0');
                } else if (key == "n") {
                    cur.n = std::stoi(val);
                } else if (key == "delta") {
                    cur.delta = std::stoi(val);
                } else if (key == "exact") {
                    cur.exact = (val == "yes");
                } else if (key == "rareness") {
                    cur.rareness = val;
                } else {
                    throw ParseError("unknown key in entry line: " + key, lineno, 1);
                }
            }
            open = true;
        } else if (line == "end") {
            if (!open) throw ParseError("end without entry", lineno, 1);
            if (static_cast<int>(cur.log_rows.size()) != cur.delta - 2)
                throw ParseError("entry must carry delta-2 coefficient rows", lineno, 1);
            out.push_back(cur);
            open = false;
        } else {
            if (!open) throw ParseError("coefficient row outside an entry", lineno, 1);
            std::istringstream ls(line);
            std::vector<int> row;
            int v;
            while (ls >> v) row.push_back(v);
            if (!ls.eof()) throw ParseError("bad integer in coefficient row", lineno, 1);
            if (static_cast<int>(row.size()) != cur.n - 1)
                throw ParseError("coefficient row must have n-1 entries", lineno, 1);
            cur.log_rows.push_back(std::move(row));
        }
    }
    if (open) throw ParseError("unterminated entry", lineno, 1);
    return out;
}

const std::vector<TableEntry>& bundled_tables()
{
    static const std::vector<TableEntry> tables = parse_tables(kTablesText);
    return tables;
}

}  // namespace mdsconv
