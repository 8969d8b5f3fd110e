#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace nnspod {

/// Little-endian binary writer/reader for model containers. Doubles are
/// written bit-exact so a rerun with identical inputs produces an identical
/// file.
class BinWriter {
public:
    explicit BinWriter(const std::filesystem::path& path);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f64(double v);
    void vec(const Eigen::VectorXd& v);
    void mat(const Eigen::MatrixXd& m);   // row-major payload
    void str(const std::string& s);
    void close();

private:
    void raw(const void* data, size_t n);
    std::ofstream out_;
    std::filesystem::path path_;
};

class BinReader {
public:
    explicit BinReader(const std::filesystem::path& path);
    std::uint32_t u32();
    std::uint64_t u64();
    double f64();
    Eigen::VectorXd vec();
    Eigen::MatrixXd mat();
    std::string str();

private:
    void raw(void* data, size_t n);
    std::ifstream in_;
    std::filesystem::path path_;
};

} // namespace nnspod
