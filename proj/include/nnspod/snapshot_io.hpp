#pragma once

#include "nnspod/snapshot.hpp"

#include <filesystem>
#include <string>

namespace nnspod {

enum class SnapshotFormat { Csv, Binary };

/// CSV layout: `<dir>/grid.csv` holds one coordinate row per node with header
/// x0[,x1]; `<dir>/snapshots.csv` holds one snapshot per row, first p columns
/// the parameter vector (header mu0,mu1,...), remaining n columns the field
/// values (header f0,f1,...). Binary layout: single `<dir>/snapshots.srom`
/// container, magic "SROM", little-endian.
void save_snapshots(const SnapshotSet& set, const std::filesystem::path& dir, SnapshotFormat format);

SnapshotSet load_snapshots(const std::filesystem::path& dir, SnapshotFormat format);

/// Error carrying the offending file and, when known, line/column context.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nnspod
