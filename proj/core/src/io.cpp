#include "hodgeloop/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hodgeloop {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw InputError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

Mat read_csv_matrix(const fs::path& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw InputError("non-numeric CSV field '" + field + "' in " +
                                 path.string());
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError("ragged CSV rows in " + path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return Mat(0, 0);
    Mat m(static_cast<Eigen::Index>(rows.size()),
          static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[i][j];
    return m;
}

std::string csv_from_matrix(const Mat& m) {
    std::string out;
    if (m.cols() == 0) return out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_csv_matrix(const fs::path& path, const Mat& m) {
    atomic_write(path, csv_from_matrix(m));
}

namespace {

void skip_pgm_junk(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

}  // namespace

GrayImage read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5")
        throw InputError("not a PGM (P2/P5) file: " + path.string());

    GrayImage img;
    skip_pgm_junk(in);
    in >> img.width;
    skip_pgm_junk(in);
    in >> img.height;
    skip_pgm_junk(in);
    in >> img.max_val;
    if (!in || img.width <= 0 || img.height <= 0 || img.max_val <= 0)
        throw InputError("malformed PGM header: " + path.string());

    const int count = img.width * img.height;
    img.intensity.resize(count);
    if (magic == "P2") {
        for (int i = 0; i < count; ++i) {
            in >> img.intensity[i];
            if (!in) throw InputError("truncated P2 data: " + path.string());
        }
    } else {
        in.get();  // single whitespace after the header
        const int bytes = img.max_val > 255 ? 2 : 1;
        std::vector<unsigned char> raw(static_cast<std::size_t>(count) * bytes);
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw InputError("truncated P5 data: " + path.string());
        for (int i = 0; i < count; ++i)
            img.intensity[i] = bytes == 1
                                   ? raw[i]
                                   : (raw[2 * i] << 8) | raw[2 * i + 1];
    }
    return img;
}

std::string complex_to_json(const Complex2& complex) {
    json j;
    j["format_version"] = 1;
    j["kind"] = complex.kind == ComplexKind::simplicial ? "simplicial" : "cubical";
    j["vertices"] = complex.n0;
    json edges = json::array();
    for (const auto& e : complex.edges) edges.push_back({e[0], e[1]});
    j["edges"] = std::move(edges);
    json cells = json::array();
    for (const auto& c : complex.cells2) {
        json cell = json::array();
        for (int i = 0; i < c.size; ++i) cell.push_back(c.v[i]);
        cells.push_back(std::move(cell));
    }
    j["cells2"] = std::move(cells);
    return j.dump(2) + "\n";
}

Complex2 complex_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("complex JSON parse error: ") + e.what());
    }
    Complex2 cx;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "simplicial") cx.kind = ComplexKind::simplicial;
    else if (kind == "cubical") cx.kind = ComplexKind::cubical;
    else throw InputError("complex JSON: unknown kind '" + kind + "'");
    cx.n0 = j.at("vertices").get<int>();
    for (const auto& e : j.at("edges"))
        cx.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    for (const auto& c : j.at("cells2")) {
        Cell2 cell;
        cell.size = static_cast<int>(c.size());
        if (cell.size != 3 && cell.size != 4)
            throw InputError("complex JSON: cells2 entries must have 3 or 4 vertices");
        for (int i = 0; i < cell.size; ++i) cell.v[i] = c.at(i).get<int>();
        cx.cells2.push_back(cell);
    }
    cx.validate();
    return cx;
}

Complex2 read_complex_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return complex_from_json_text(ss.str());
}

void write_complex_json(const fs::path& path, const Complex2& complex) {
    atomic_write(path, complex_to_json(complex));
}

std::string matrix_market_integer(const SpMatInt& m) {
    std::string out = "%%MatrixMarket matrix coordinate integer general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
           std::to_string(m.nonZeros()) + "\n";
    for (int c = 0; c < m.outerSize(); ++c)
        for (SpMatInt::InnerIterator it(m, c); it; ++it)
            out += std::to_string(it.row() + 1) + " " + std::to_string(it.col() + 1) +
                   " " + std::to_string(it.value()) + "\n";
    return out;
}

SpMat read_matrix_market(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open: " + path.string());
    std::string header;
    if (!std::getline(in, header) ||
        header.rfind("%%MatrixMarket matrix coordinate", 0) != 0)
        throw InputError("not a Matrix Market coordinate file: " + path.string());
    const bool symmetric = header.find("symmetric") != std::string::npos;

    std::string line;
    while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
    }
    std::istringstream sizes(line);
    Eigen::Index rows = 0, cols = 0;
    std::size_t nnz = 0;
    if (!(sizes >> rows >> cols >> nnz))
        throw InputError("malformed Matrix Market size line: " + path.string());

    std::vector<Triplet> trip;
    trip.reserve(symmetric ? 2 * nnz : nnz);
    for (std::size_t i = 0; i < nnz; ++i) {
        Eigen::Index r, c;
        double v;
        if (!(in >> r >> c >> v))
            throw InputError("truncated Matrix Market data: " + path.string());
        trip.emplace_back(r - 1, c - 1, v);
        if (symmetric && r != c) trip.emplace_back(c - 1, r - 1, v);
    }
    SpMat m(rows, cols);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

std::string matrix_market_real(const SpMat& m) {
    std::string out = "%%MatrixMarket matrix coordinate real general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
           std::to_string(m.nonZeros()) + "\n";
    for (int c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it)
            out += std::to_string(it.row() + 1) + " " + std::to_string(it.col() + 1) +
                   " " + format_double(it.value()) + "\n";
    return out;
}

}  // namespace hodgeloop
