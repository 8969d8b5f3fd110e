#include "nnspod/serialize.hpp"
#include "nnspod/snapshot_io.hpp"

#include <cstring>

namespace nnspod {

BinWriter::BinWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoError("cannot open for write: " + path.string());
}

void BinWriter::raw(const void* data, size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out_) throw IoError("write failed: " + path_.string());
}

void BinWriter::u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    raw(b, 4);
}

void BinWriter::u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    raw(b, 8);
}

void BinWriter::f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
}

void BinWriter::vec(const Eigen::VectorXd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (long i = 0; i < v.size(); ++i) f64(v[i]);
}

void BinWriter::mat(const Eigen::MatrixXd& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c) f64(m(r, c));
}

void BinWriter::str(const std::string& s) {
    u64(s.size());
    if (!s.empty()) raw(s.data(), s.size());
}

void BinWriter::close() {
    out_.close();
    if (out_.fail()) throw IoError("close failed: " + path_.string());
}

BinReader::BinReader(const std::filesystem::path& path)
    : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("missing file: " + path.string());
}

void BinReader::raw(void* data, size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n))
        throw IoError("truncated file: " + path_.string());
}

std::uint32_t BinReader::u32() {
    unsigned char b[4];
    raw(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t BinReader::u64() {
    unsigned char b[8];
    raw(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double BinReader::f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

Eigen::VectorXd BinReader::vec() {
    const auto n = static_cast<long>(u64());
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = f64();
    return v;
}

Eigen::MatrixXd BinReader::mat() {
    const auto r = static_cast<long>(u64());
    const auto c = static_cast<long>(u64());
    Eigen::MatrixXd m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) m(i, j) = f64();
    return m;
}

std::string BinReader::str() {
    const auto n = u64();
    std::string s(n, '\0');
    if (n) raw(s.data(), n);
    return s;
}

} // namespace nnspod
