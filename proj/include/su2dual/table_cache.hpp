// Shared store of LoopOperatorTables keyed by (g, L_max) plus numerical options,
// optionally mirrored to a directory on disk.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "su2dual/operators.hpp"

namespace su2dual {

class TableCache {
public:
    explicit TableCache(std::string disk_dir = "", RadialOptions radial = {}, TableOptions table = {});

    std::shared_ptr<const LoopOperatorTable> get(const Coupling& c, int lmax);
    std::string key(const Coupling& c, int lmax) const;

    std::size_t size() const;
    std::size_t disk_hits() const { return disk_hits_; }
    const RadialOptions& radial_options() const { return radial_; }
    const TableOptions& table_options() const { return table_; }

private:
    std::string dir_;
    RadialOptions radial_;
    TableOptions table_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<const LoopOperatorTable>> mem_;
    std::size_t disk_hits_ = 0;
};

// Directory from SU2DUAL_CACHE_DIR, or empty when unset.
std::string cache_dir_from_env();

}  // namespace su2dual
