#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include "robust_lrt/densities.hpp"
#include "robust_lrt/numerics.hpp"

namespace robust_lrt::test {

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("robust_lrt_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline DensityGrid reference_p0(const IntensityGrid& grid = IntensityGrid()) {
    return to_grid(reference_model().h0, grid);
}

inline DensityGrid reference_p1(const IntensityGrid& grid = IntensityGrid()) {
    return to_grid(reference_model().h1, grid);
}

} // namespace robust_lrt::test
