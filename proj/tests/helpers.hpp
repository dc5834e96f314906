#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "findex/matrix.hpp"
#include "findex/panel.hpp"
#include "findex/rng.hpp"

namespace testutil {

// ReturnPanel stub carrying only what correlation()/spectra need.
inline findex::ReturnPanel panel_from_returns(const findex::Matrix& R) {
    findex::ReturnPanel rp;
    rp.R = R;
    for (size_t i = 0; i < R.rows(); ++i) rp.labels.push_back("s" + std::to_string(i + 1));
    for (size_t t = 0; t < R.cols(); ++t) rp.dates.emplace_back(static_cast<int>(t));
    return rp;
}

inline findex::Matrix gaussian_returns(size_t n, size_t len, uint64_t seed) {
    findex::Matrix R(n, len);
    findex::Rng rng(seed);
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < len; ++t) R(i, t) = rng.gaussian();
    return R;
}

// Random symmetric adjacency with edge probability p, as bitmasks.
inline std::vector<uint64_t> random_graph(size_t n, double p, findex::Rng& rng) {
    std::vector<uint64_t> nb(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < p) {
                nb[i] |= 1ull << j;
                nb[j] |= 1ull << i;
            }
    return nb;
}

// Unique scratch directory under the build tree.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("findex_test_" + tag + "_" + std::to_string(++counter)))
                    .string();
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const {
        return (std::filesystem::path(path_) / name).string();
    }

  private:
    std::string path_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
