#include "nnspod/snapshot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace nnspod {
namespace {

constexpr char kMagic[4] = {'S', 'R', 'O', 'M'};
constexpr std::uint32_t kVersion = 1;

void write_exact(std::ofstream& out, const void* data, size_t n, const std::filesystem::path& p) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out) throw IoError("write failed: " + p.string());
}

void read_exact(std::ifstream& in, void* data, size_t n, const std::filesystem::path& p) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n))
        throw IoError("truncated file: " + p.string());
}

void put_u32(std::ofstream& out, std::uint32_t v, const std::filesystem::path& p) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    write_exact(out, b, 4, p);
}

std::uint32_t get_u32(std::ifstream& in, const std::filesystem::path& p) {
    unsigned char b[4];
    read_exact(in, b, 4, p);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

void put_f64_block(std::ofstream& out, const double* data, long n, const std::filesystem::path& p) {
    static_assert(sizeof(double) == 8);
    // Assumes little-endian host, which covers every supported target.
    write_exact(out, data, static_cast<size_t>(n) * 8, p);
}

void get_f64_block(std::ifstream& in, double* data, long n, const std::filesystem::path& p) {
    read_exact(in, data, static_cast<size_t>(n) * 8, p);
}

std::string format_full(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, const std::filesystem::path& p, long line_no) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
        throw IoError("malformed number '" + tok + "' in " + p.string() + " line " +
                      std::to_string(line_no));
    if (std::isnan(v))
        throw IoError("NaN entry in " + p.string() + " line " + std::to_string(line_no));
    return v;
}

void save_csv(const SnapshotSet& set, const std::filesystem::path& dir) {
    const auto grid_path = dir / "grid.csv";
    std::ofstream gout(grid_path);
    if (!gout) throw IoError("cannot open for write: " + grid_path.string());
    gout << (set.grid().dim() == 1 ? "x0" : "x0,x1") << "\n";
    const auto& coords = set.grid().coords();
    for (long i = 0; i < coords.rows(); ++i) {
        for (long a = 0; a < coords.cols(); ++a)
            gout << (a ? "," : "") << format_full(coords(i, a));
        gout << "\n";
    }
    if (!gout) throw IoError("write failed: " + grid_path.string());

    const auto snap_path = dir / "snapshots.csv";
    std::ofstream sout(snap_path);
    if (!sout) throw IoError("cannot open for write: " + snap_path.string());
    for (int j = 0; j < set.param_dim(); ++j) sout << (j ? "," : "") << "mu" << j;
    for (long j = 0; j < set.field_size(); ++j) sout << ",f" << j;
    sout << "\n";
    for (long i = 0; i < set.count(); ++i) {
        for (int j = 0; j < set.param_dim(); ++j)
            sout << (j ? "," : "") << format_full(set.params()(i, j));
        for (long j = 0; j < set.field_size(); ++j)
            sout << "," << format_full(set.fields()(i, j));
        sout << "\n";
    }
    if (!sout) throw IoError("write failed: " + snap_path.string());
}

SnapshotSet load_csv(const std::filesystem::path& dir) {
    const auto grid_path = dir / "grid.csv";
    std::ifstream gin(grid_path);
    if (!gin) throw IoError("missing file: " + grid_path.string());
    std::string line;
    if (!std::getline(gin, line)) throw IoError("empty file: " + grid_path.string());
    auto header = split_csv_line(line);
    int dim;
    if (header.size() == 1 && header[0] == "x0") dim = 1;
    else if (header.size() == 2 && header[0] == "x0" && header[1] == "x1") dim = 2;
    else throw IoError("bad grid header in " + grid_path.string() + " (expected x0[,x1])");

    std::vector<double> coord_data;
    long line_no = 1;
    while (std::getline(gin, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = split_csv_line(line);
        if (static_cast<int>(toks.size()) != dim)
            throw IoError("ragged row in " + grid_path.string() + " line " + std::to_string(line_no));
        for (auto& t : toks) coord_data.push_back(parse_double(t, grid_path, line_no));
    }
    const long n = static_cast<long>(coord_data.size()) / dim;

    Grid grid = [&] {
        if (dim == 1) {
            Eigen::VectorXd nodes(n);
            for (long i = 0; i < n; ++i) nodes[i] = coord_data[static_cast<size_t>(i)];
            return Grid::line(nodes);
        }
        // Recover the per-axis node vectors of the row-major tensor product.
        Eigen::MatrixXd c(n, 2);
        for (long i = 0; i < n; ++i) {
            c(i, 0) = coord_data[static_cast<size_t>(2 * i)];
            c(i, 1) = coord_data[static_cast<size_t>(2 * i + 1)];
        }
        long ny = 1;
        while (ny < n && c(ny, 0) == c(0, 0)) ++ny;
        if (ny < 2 || n % ny != 0)
            throw IoError("grid is not a structured tensor product: " + grid_path.string());
        const long nx = n / ny;
        Eigen::VectorXd xs(nx), ys(ny);
        for (long iy = 0; iy < ny; ++iy) ys[iy] = c(iy, 1);
        for (long ix = 0; ix < nx; ++ix) xs[ix] = c(ix * ny, 0);
        Grid g = Grid::structured(xs, ys);
        if (g.coords() != c)
            throw IoError("grid is not a structured tensor product: " + grid_path.string());
        return g;
    }();

    const auto snap_path = dir / "snapshots.csv";
    std::ifstream sin(snap_path);
    if (!sin) throw IoError("missing file: " + snap_path.string());
    if (!std::getline(sin, line)) throw IoError("empty file: " + snap_path.string());
    header = split_csv_line(line);
    int p = 0;
    while (p < static_cast<int>(header.size()) && header[static_cast<size_t>(p)] == "mu" + std::to_string(p))
        ++p;
    if (p == 0)
        throw IoError("missing param column 'mu0' in " + snap_path.string());
    const long n_fields = static_cast<long>(header.size()) - p;
    if (n_fields != n)
        throw IoError("snapshots.csv has " + std::to_string(n_fields) + " field columns, grid has " +
                      std::to_string(n) + " nodes: " + snap_path.string());
    for (long j = 0; j < n_fields; ++j)
        if (header[static_cast<size_t>(p + j)] != "f" + std::to_string(j))
            throw IoError("bad field column header '" + header[static_cast<size_t>(p + j)] +
                          "' in " + snap_path.string());

    std::vector<std::vector<double>> rows;
    line_no = 1;
    while (std::getline(sin, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto toks = split_csv_line(line);
        if (static_cast<long>(toks.size()) != p + n_fields)
            throw IoError("ragged row in " + snap_path.string() + " line " + std::to_string(line_no));
        std::vector<double> row;
        row.reserve(toks.size());
        for (auto& t : toks) row.push_back(parse_double(t, snap_path, line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("no snapshots in " + snap_path.string());

    Eigen::MatrixXd params(static_cast<long>(rows.size()), p);
    Eigen::MatrixXd fields(static_cast<long>(rows.size()), n_fields);
    for (long i = 0; i < static_cast<long>(rows.size()); ++i) {
        for (int j = 0; j < p; ++j) params(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        for (long j = 0; j < n_fields; ++j)
            fields(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(p + j)];
    }
    return SnapshotSet(std::move(grid), std::move(params), std::move(fields));
}

void save_binary(const SnapshotSet& set, const std::filesystem::path& dir) {
    const auto path = dir / "snapshots.srom";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path.string());
    write_exact(out, kMagic, 4, path);
    put_u32(out, kVersion, path);
    put_u32(out, static_cast<std::uint32_t>(set.grid().dim()), path);
    for (int a = 0; a < set.grid().dim(); ++a)
        put_u32(out, static_cast<std::uint32_t>(set.grid().axis_size(a)), path);
    put_u32(out, static_cast<std::uint32_t>(set.param_dim()), path);
    put_u32(out, static_cast<std::uint32_t>(set.count()), path);
    for (int a = 0; a < set.grid().dim(); ++a) {
        const auto& nodes = set.grid().axis_nodes(a);
        put_f64_block(out, nodes.data(), nodes.size(), path);
    }
    // Row-major blocks so the layout is independent of Eigen's default.
    for (long i = 0; i < set.count(); ++i) {
        Eigen::VectorXd row = set.params().row(i).transpose();
        put_f64_block(out, row.data(), row.size(), path);
    }
    for (long i = 0; i < set.count(); ++i) {
        Eigen::VectorXd row = set.fields().row(i).transpose();
        put_f64_block(out, row.data(), row.size(), path);
    }
}

SnapshotSet load_binary(const std::filesystem::path& dir) {
    const auto path = dir / "snapshots.srom";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("missing file: " + path.string());
    char magic[4];
    read_exact(in, magic, 4, path);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("bad magic (not a snapshot container): " + path.string());
    const auto version = get_u32(in, path);
    if (version != kVersion)
        throw IoError("unsupported container version " + std::to_string(version) + ": " + path.string());
    const auto dim = get_u32(in, path);
    if (dim != 1 && dim != 2) throw IoError("bad dimension in " + path.string());
    std::uint32_t axis_n[2] = {0, 0};
    for (std::uint32_t a = 0; a < dim; ++a) axis_n[a] = get_u32(in, path);
    const auto p = get_u32(in, path);
    const auto count = get_u32(in, path);

    Eigen::VectorXd xs(axis_n[0]);
    get_f64_block(in, xs.data(), xs.size(), path);
    Grid grid = [&] {
        if (dim == 1) return Grid::line(xs);
        Eigen::VectorXd ys(axis_n[1]);
        get_f64_block(in, ys.data(), ys.size(), path);
        return Grid::structured(xs, ys);
    }();

    Eigen::MatrixXd params(count, p);
    for (std::uint32_t i = 0; i < count; ++i) {
        Eigen::VectorXd row(p);
        get_f64_block(in, row.data(), row.size(), path);
        params.row(i) = row.transpose();
    }
    Eigen::MatrixXd fields(count, grid.size());
    for (std::uint32_t i = 0; i < count; ++i) {
        Eigen::VectorXd row(grid.size());
        get_f64_block(in, row.data(), row.size(), path);
        fields.row(i) = row.transpose();
    }
    return SnapshotSet(std::move(grid), std::move(params), std::move(fields));
}

} // namespace

void save_snapshots(const SnapshotSet& set, const std::filesystem::path& dir, SnapshotFormat format) {
    std::filesystem::create_directories(dir);
    if (format == SnapshotFormat::Csv)
        save_csv(set, dir);
    else
        save_binary(set, dir);
}

SnapshotSet load_snapshots(const std::filesystem::path& dir, SnapshotFormat format) {
    return format == SnapshotFormat::Csv ? load_csv(dir) : load_binary(dir);
}

} // namespace nnspod
