#include "su2dual/table_cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace su2dual {

TableCache::TableCache(std::string disk_dir, RadialOptions radial, TableOptions table)
    : dir_(std::move(disk_dir)), radial_(radial), table_(table) {}

std::string TableCache::key(const Coupling& c, int lmax) const {
    std::ostringstream os;
    os << "g=" << c.key() << ";L=" << lmax << ";rtol=" << radial_.tol << ";qtol=" << table_.quad_tol
       << ";qmax=" << table_.max_level;
    return os.str();
}

std::size_t TableCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return mem_.size();
}

std::shared_ptr<const LoopOperatorTable> TableCache::get(const Coupling& c, int lmax) {
    const std::string k = key(c, lmax);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = mem_.find(k);
        if (it != mem_.end()) return it->second;
    }
    std::filesystem::path file;
    if (!dir_.empty()) {
        char name[32];
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a, stable across runs and platforms
        for (unsigned char ch : k) h = (h ^ ch) * 1099511628211ull;
        std::snprintf(name, sizeof name, "%016llx.tbl", static_cast<unsigned long long>(h));
        file = std::filesystem::path(dir_) / name;
        std::ifstream in(file, std::ios::binary);
        if (in) {
            auto t = std::make_shared<LoopOperatorTable>();
            if (load_table(*t, k, in)) {
                std::lock_guard<std::mutex> lock(mu_);
                ++disk_hits_;
                return mem_.emplace(k, t).first->second;
            }
        }
    }
    // Rounding g to 12 significant digits makes nearby optimizer iterates share entries.
    Coupling rounded = c.is_electric() ? c : Coupling::finite(std::stod(c.key()));
    auto t = std::make_shared<LoopOperatorTable>(build_operator_table(build_local_basis(rounded, lmax, radial_), table_));
    if (!file.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        const auto tmp = file.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (out) save_table(*t, k, out);
        }
        std::filesystem::rename(tmp, file, ec);
    }
    std::lock_guard<std::mutex> lock(mu_);
    return mem_.emplace(k, t).first->second;
}

std::string cache_dir_from_env() {
    const char* v = std::getenv("SU2DUAL_CACHE_DIR");
    return v ? std::string(v) : std::string();
}

}  // namespace su2dual
