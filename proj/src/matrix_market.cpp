#include "rpfm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rpfm/errors.hpp"

namespace rpfm {

namespace {

enum class Layout { Coordinate, Array };
enum class Symmetry { General, Symmetric, SkewSymmetric };

struct Header {
    Layout layout = Layout::Coordinate;
    Symmetry symmetry = Symmetry::General;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

class LineReader {
public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '%') continue;
            return true;
        }
        return false;
    }

    bool raw(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_no_ = 0;
};

Header parse_header(LineReader& r) {
    std::string line;
    if (!r.raw(line)) r.fail("empty input");
    std::istringstream ss(line);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") r.fail("missing %%MatrixMarket banner");
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix") r.fail("unsupported object '" + object + "'");

    Header h;
    if (format == "coordinate") {
        h.layout = Layout::Coordinate;
    } else if (format == "array") {
        h.layout = Layout::Array;
    } else {
        r.fail("unknown format '" + format + "'");
    }

    if (field == "complex" || field == "pattern") {
        throw UnsupportedFormat("Matrix Market field '" + field + "' is not supported");
    }
    if (field != "real" && field != "integer" && field != "double") r.fail("unknown field '" + field + "'");

    if (symmetry == "general") {
        h.symmetry = Symmetry::General;
    } else if (symmetry == "symmetric") {
        h.symmetry = Symmetry::Symmetric;
    } else if (symmetry == "skew-symmetric") {
        h.symmetry = Symmetry::SkewSymmetric;
    } else if (symmetry == "hermitian") {
        throw UnsupportedFormat("Matrix Market hermitian storage is not supported");
    } else {
        r.fail("unknown symmetry '" + symmetry + "'");
    }
    return h;
}

template <typename T>
bool parse_token(std::string_view tok, T& out) {
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) toks.push_back(line.substr(start, i - start));
    }
    return toks;
}

double parse_value(LineReader& r, std::string_view tok) {
    double v = 0.0;
    if (!parse_token(tok, v)) r.fail("bad numeric value '" + std::string(tok) + "'");
    if (!std::isfinite(v)) r.fail("non-finite value");
    return v;
}

std::size_t parse_count(LineReader& r, std::string_view tok, const char* what) {
    std::size_t v = 0;
    if (!parse_token(tok, v)) r.fail(std::string("bad ") + what + " '" + std::string(tok) + "'");
    return v;
}

DenseMatrix read_body(LineReader& r, const Header& h) {
    std::string line;
    if (!r.next(line)) r.fail("missing size line");
    const auto size_toks = split(line);
    const std::size_t expected = h.layout == Layout::Coordinate ? 3 : 2;
    if (size_toks.size() != expected) r.fail("malformed size line");
    const std::size_t rows = parse_count(r, size_toks[0], "row count");
    const std::size_t cols = parse_count(r, size_toks[1], "column count");
    if (rows == 0 || cols == 0) r.fail("matrix dimensions must be positive");
    if (h.symmetry != Symmetry::General && rows != cols) r.fail("symmetric storage requires a square matrix");

    DenseMatrix a(rows, cols);

    if (h.layout == Layout::Coordinate) {
        const std::size_t nnz = parse_count(r, size_toks[2], "entry count");
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!r.next(line)) r.fail("expected " + std::to_string(nnz) + " entries, got " + std::to_string(k));
            const auto t = split(line);
            if (t.size() != 3) r.fail("coordinate entry needs 3 fields");
            const std::size_t i = parse_count(r, t[0], "row index");
            const std::size_t j = parse_count(r, t[1], "column index");
            if (i < 1 || i > rows || j < 1 || j > cols) r.fail("index out of range");
            const double v = parse_value(r, t[2]);
            a(i - 1, j - 1) += v;
            if (i != j) {
                if (h.symmetry == Symmetry::Symmetric) a(j - 1, i - 1) += v;
                if (h.symmetry == Symmetry::SkewSymmetric) a(j - 1, i - 1) -= v;
            }
        }
    } else {
        // Column-major; symmetric variants list the lower triangle only.
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t first = h.symmetry == Symmetry::General ? 0
                                      : h.symmetry == Symmetry::Symmetric ? j
                                                                           : j + 1;
            for (std::size_t i = first; i < rows; ++i) {
                if (!r.next(line)) r.fail("array data ended early");
                const auto t = split(line);
                if (t.size() != 1) r.fail("array entry needs 1 field");
                const double v = parse_value(r, t[0]);
                a(i, j) = v;
                if (i != j && h.symmetry == Symmetry::Symmetric) a(j, i) = v;
                if (i != j && h.symmetry == Symmetry::SkewSymmetric) a(j, i) = -v;
            }
        }
    }
    if (r.next(line)) r.fail("trailing data after last entry");
    return a;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void put_double(std::ostream& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.write(buf, ptr - buf);
}

}  // namespace

DenseMatrix read_matrix_market(std::istream& in, const std::string& source) {
    LineReader r(in, source);
    const Header h = parse_header(r);
    return read_body(r, h);
}

DenseMatrix load_matrix_market(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_matrix_market(in, path.string());
}

Vector read_vector(std::istream& in, const std::string& source) {
    const DenseMatrix a = read_matrix_market(in, source);
    if (a.cols() != 1 && a.rows() != 1) {
        throw DimensionMismatch(source + ": expected a vector, got " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
    }
    const auto e = a.entries();
    return Vector(std::vector<double>(e.begin(), e.end()));
}

Vector load_vector(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_vector(in, path.string());
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a) {
    std::size_t nnz = 0;
    for (double v : a.entries()) nnz += v != 0.0;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) == 0.0) continue;
            out << i + 1 << ' ' << j + 1 << ' ';
            put_double(out, a(i, j));
            out << '\n';
        }
    }
}

void save_matrix_market(const DenseMatrix& a, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_matrix_market(out, a);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_vector(std::ostream& out, const Vector& v) {
    out << "%%MatrixMarket matrix array real general\n";
    out << v.size() << " 1\n";
    for (double e : v) {
        put_double(out, e);
        out << '\n';
    }
}

void save_vector(const Vector& v, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_vector(out, v);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace rpfm
