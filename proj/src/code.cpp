#include "mdsconv/code.hpp"

#include <fstream>
#include <sstream>

namespace mdsconv {

Matrix matmul(const Matrix& x, const Matrix& y, const Field& f)
{
    Matrix out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int l = 0; l < x.cols; ++l) {
            Fe v = x.at(i, l);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                out.at(i, j) ^= f.mul(v, y.at(l, j));
        }
    return out;
}

Matrix transpose(const Matrix& x)
{
    Matrix out(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) out.at(j, i) = x.at(i, j);
    return out;
}

Code::Code(FieldPtr field, int n, std::vector<std::vector<Fe>> coeff_rows)
    : field_(std::move(field)), n_(n)
{
    if (n_ < 2) throw Error("block length must be at least 2");
    if (coeff_rows.empty()) throw Error("need at least the degree-0 coefficient row");
    deg_ = static_cast<int>(coeff_rows.size()) - 1;
    coeff_.reserve(coeff_rows.size() * static_cast<std::size_t>(k()));
    for (const auto& row : coeff_rows) {
        if (static_cast<int>(row.size()) != k())
            throw RowLengthMismatch("coefficient row must have k = n-1 entries");
        for (Fe v : row) {
            if (v >= field_->size()) throw Error("coefficient outside the field");
            coeff_.push_back(v);
        }
    }
}

Code Code::from_log_rows(FieldPtr field, int n, const std::vector<std::vector<int>>& log_rows)
{
    int k = n - 1;
    std::vector<std::vector<Fe>> rows;
    rows.emplace_back(k, Fe{1});
    for (const auto& lr : log_rows) {
        if (static_cast<int>(lr.size()) != k)
            throw RowLengthMismatch("log row must have k = n-1 entries");
        std::vector<Fe> row(k);
        for (int idx = 0; idx < k; ++idx) {
            int lg = lr[idx];
            if (lg < 0 || lg > static_cast<int>(field->order()) - 1)
                throw LogOutOfRange("log value outside 0..2^m-2");
            // table rows are j-descending: first entry is r(i,k)
            row[k - 1 - idx] = field->exp(lg);
        }
        rows.push_back(std::move(row));
    }
    return Code(std::move(field), n, std::move(rows));
}

bool Code::canonical() const
{
    for (int j = 1; j <= k(); ++j)
        if (r(0, j) != 1) return false;
    return deg_ < 1 || r(1, k()) == 1;
}

Matrix parity_truncated(const Code& code, int L)
{
    int n = code.n(), k = code.k();
    Matrix h(L + 1, n * (L + 1));
    for (int row = 0; row <= L; ++row)
        for (int col = 0; col < n * (L + 1); ++col) {
            int t = col / n, c = col % n;
            if (c == k) {
                h.at(row, col) = (row == t) ? 1 : 0;
            } else {
                int deg = row - t;
                if (deg >= 0 && deg <= code.deg()) h.at(row, col) = code.r(deg, c + 1);
            }
        }
    return h;
}

Matrix generator_truncated(const Code& code, int L)
{
    int n = code.n(), k = code.k();
    Matrix g(k * (L + 1), n * (L + 1));
    for (int row = 0; row < k * (L + 1); ++row) {
        int b = row / k, r = row % k;
        for (int col = 0; col < n * (L + 1); ++col) {
            int t = col / n, c = col % n;
            if (c < k) {
                g.at(row, col) = (t == b && c == r) ? 1 : 0;
            } else {
                int deg = t - b;
                if (deg >= 0 && deg <= code.deg()) g.at(row, col) = code.r(deg, r + 1);
            }
        }
    }
    return g;
}

Matrix reduced_matrix(const Code& code, int D)
{
    if (D > code.deg()) throw Error("reduced matrix degree exceeds the code degree");
    int k = code.k();
    Matrix h(D + 1, k * (D + 1));
    for (int row = 0; row <= D; ++row)
        for (int col = 0; col < k * (D + 1); ++col) {
            int t = col / k, c = col % k;
            int deg = row - t;
            if (deg >= 0 && deg <= code.deg()) h.at(row, col) = code.r(deg, c + 1);
        }
    return h;
}

std::string code_to_string(const Code& code)
{
    const Field& f = code.field();
    std::ostringstream out;
    out << "gf " << f.m() << " 0b";
    for (int b = f.m(); b >= 0; --b) out << ((f.poly_mask() >> b) & 1u);
    out << "\nn " << code.n() << "\nrows " << code.deg() << "\n";
    for (int i = 1; i <= code.deg(); ++i) {
        for (int j = code.k(); j >= 1; --j) {
            Fe v = code.r(i, j);
            if (v == 0) throw Error("cannot serialize a zero coefficient as a log");
            out << f.log(v);
            if (j > 1) out << ' ';
        }
        out << '\n';
    }
    return out.str();
}

namespace {

struct LineReader {
    std::istringstream in;
    std::size_t lineno = 0;
    explicit LineReader(const std::string& text) : in(text) {}
    bool next(std::string& line)
    {
        if (!std::getline(in, line)) return false;
        ++lineno;
        return true;
    }
};

}  // namespace

Code code_from_string(const std::string& text)
{
    LineReader rd(text);
    std::string line;

    auto expect_line = [&](const char* what) {
        if (!rd.next(line)) throw ParseError(std::string("missing ") + what, rd.lineno + 1, 1);
    };

    expect_line("gf header");
    std::istringstream hs(line);
    std::string tag, polytext;
    int m = 0;
    if (!(hs >> tag >> m >> polytext) || tag != "gf")
        throw ParseError("expected `gf <m> <poly_mask_binary>`", rd.lineno, 1);
    if (polytext.size() < 3 || polytext[0] != '0' || polytext[1] != 'b')
        throw ParseError("polynomial mask must be written in binary with a 0b prefix", rd.lineno, 1);
    std::uint32_t poly = 0;
    for (std::size_t i = 2; i < polytext.size(); ++i) {
        char ch = polytext[i];
        if (ch != '0' && ch != '1')
            throw ParseError("bad binary digit in polynomial mask", rd.lineno, i + 1);
        poly = (poly << 1) | static_cast<std::uint32_t>(ch - '0');
    }
    FieldPtr field;
    try {
        field = Field::make(m, poly);
    } catch (const NotPrimitive& e) {
        throw FieldMismatch(std::string("declared polynomial is not primitive: ") + e.what());
    } catch (const BadDegree& e) {
        throw FieldMismatch(std::string("bad field degree: ") + e.what());
    }

    expect_line("n header");
    std::istringstream ns(line);
    int n = 0;
    if (!(ns >> tag >> n) || tag != "n") {
        if (tag == "gf") throw ParseError("duplicate gf header", rd.lineno, 1);
        throw ParseError("expected `n <n>`", rd.lineno, 1);
    }
    if (n < 2) throw ParseError("block length must be at least 2", rd.lineno, 3);

    expect_line("rows header");
    std::istringstream rs(line);
    int nrows = 0;
    if (!(rs >> tag >> nrows) || tag != "rows") {
        if (tag == "n" || tag == "gf") throw ParseError("duplicate header", rd.lineno, 1);
        throw ParseError("expected `rows <D>`", rd.lineno, 1);
    }
    if (nrows < 0) throw ParseError("row count must be nonnegative", rd.lineno, 6);

    std::vector<std::vector<int>> log_rows;
    for (int i = 0; i < nrows; ++i) {
        expect_line("coefficient row");
        std::istringstream ls(line);
        std::vector<int> row;
        int v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw ParseError("bad integer in coefficient row", rd.lineno, 1);
        if (static_cast<int>(row.size()) != n - 1)
            throw ParseError("coefficient row must have n-1 entries", rd.lineno, 1);
        log_rows.push_back(std::move(row));
    }
    while (rd.next(line)) {
        for (char c : line)
            if (!isspace(static_cast<unsigned char>(c)))
                throw ParseError("trailing content after coefficient rows", rd.lineno, 1);
    }

    try {
        return Code::from_log_rows(std::move(field), n, log_rows);
    } catch (const LogOutOfRange&) {
        throw ParseError("coefficient log outside 0..2^m-2", rd.lineno, 1);
    }
}

void code_to_file(const Code& code, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << code_to_string(code);
}

Code code_from_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return code_from_string(buf.str());
}

}  // namespace mdsconv
