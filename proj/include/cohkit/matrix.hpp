#pragma once
// Symmetric technology x technology matrix. Dense storage up to
// kDenseLimit codes (the IPC subclass universe fits comfortably), hash-map
// triplets above; iteration order over nonzeros is deterministic in both
// modes.

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace cohkit {

template <typename Scalar>
class SymMatrix {
public:
    static constexpr int kDenseLimit = 2000;

    SymMatrix() = default;
    explicit SymMatrix(int n)
        : n_(n), dense_(n <= kDenseLimit) {
        if (dense_) data_.assign(static_cast<std::size_t>(n) * n, Scalar(0));
    }

    int size() const { return n_; }

    Scalar operator()(int i, int j) const {
        if (dense_) return data_[static_cast<std::size_t>(i) * n_ + j];
        auto it = map_.find(key(i, j));
        return it == map_.end() ? Scalar(0) : it->second;
    }

    void set(int i, int j, Scalar v) {
        if (dense_) {
            data_[static_cast<std::size_t>(i) * n_ + j] = v;
            data_[static_cast<std::size_t>(j) * n_ + i] = v;
        } else if (v == Scalar(0)) {
            map_.erase(key(i, j));
        } else {
            map_[key(i, j)] = v;
        }
    }

    void add(int i, int j, Scalar v) {
        if (dense_) {
            data_[static_cast<std::size_t>(i) * n_ + j] += v;
            if (i != j) data_[static_cast<std::size_t>(j) * n_ + i] += v;
        } else {
            map_[key(i, j)] += v;
        }
    }

    // Visits each stored pair once (i <= j), ascending in (i, j).
    template <typename F>
    void for_each_nonzero(F&& f) const {
        if (dense_) {
            for (int i = 0; i < n_; ++i)
                for (int j = i; j < n_; ++j) {
                    Scalar v = data_[static_cast<std::size_t>(i) * n_ + j];
                    if (v != Scalar(0)) f(i, j, v);
                }
        } else {
            std::vector<std::uint64_t> keys;
            keys.reserve(map_.size());
            for (const auto& [k, v] : map_)
                if (v != Scalar(0)) keys.push_back(k);
            std::sort(keys.begin(), keys.end());
            for (std::uint64_t k : keys)
                f(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu),
                  map_.at(k));
        }
    }

    bool is_dense() const { return dense_; }

private:
    static std::uint64_t key(int i, int j) {
        if (i > j) std::swap(i, j);
        return (static_cast<std::uint64_t>(i) << 32) |
               static_cast<std::uint32_t>(j);
    }

    int n_ = 0;
    bool dense_ = true;
    std::vector<Scalar> data_;
    std::unordered_map<std::uint64_t, Scalar> map_;
};

}  // namespace cohkit
