#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpg/common.hpp"

namespace tpg {

/// Bosonic mode labels. Layouts always list modes in this canonical order.
enum class Mode : std::uint8_t { A = 0, B = 1, C = 2, P = 3 };

char                    to_char(Mode m);
Mode                    parse_mode(char c);
using ModeSet         = std::vector<Mode>;
ModeSet                 parse_modes(std::string_view labels);
std::string             to_string(const ModeSet &modes);

struct ModeSpec {
    Mode label;
    int  cutoff; ///< number of Fock levels kept, |0> .. |cutoff-1>
    bool operator==(const ModeSpec &) const = default;
};

/// Ordered list of modes with per-mode Fock cutoffs. Basis indices are row-major
/// over occupation numbers (last mode fastest).
class ModeLayout {
  public:
    ModeLayout() = default;
    explicit ModeLayout(std::vector<ModeSpec> modes);

    /// Same cutoff on every listed mode, e.g. uniform("ABC", 12).
    static ModeLayout uniform(std::string_view labels, int cutoff);

    [[nodiscard]] std::size_t               size() const { return modes_.size(); }
    [[nodiscard]] const ModeSpec           &operator[](std::size_t pos) const { return modes_[pos]; }
    [[nodiscard]] const std::vector<ModeSpec> &modes() const { return modes_; }
    [[nodiscard]] index_t                   dimension() const { return dim_; }
    [[nodiscard]] index_t                   stride(std::size_t pos) const { return strides_[pos]; }
    [[nodiscard]] int                       cutoff(Mode m) const { return modes_[require(m)].cutoff; }

    [[nodiscard]] bool                       contains(Mode m) const { return position(m).has_value(); }
    [[nodiscard]] std::optional<std::size_t> position(Mode m) const;
    /// Position of m; throws ConfigurationError when absent.
    [[nodiscard]] std::size_t require(Mode m) const;

    [[nodiscard]] int              level(index_t index, std::size_t pos) const {
        return static_cast<int>((index / strides_[pos]) % modes_[pos].cutoff);
    }
    [[nodiscard]] std::vector<int> occupation(index_t index) const;
    [[nodiscard]] index_t          index(std::span<const int> occupation) const;

    /// Layout restricted to `keep` (kept in canonical order). Throws on unknown labels.
    [[nodiscard]] ModeLayout sublayout(const ModeSet &keep) const;
    /// Layout with every cutoff multiplied by `factor`.
    [[nodiscard]] ModeLayout scaled(int factor) const;
    [[nodiscard]] ModeSet     labels() const;
    [[nodiscard]] std::string describe() const; ///< e.g. "A:12,B:12,C:12"

    bool operator==(const ModeLayout &other) const { return modes_ == other.modes_; }

  private:
    std::vector<ModeSpec> modes_;
    std::vector<index_t>  strides_;
    index_t               dim_ = 1;
};

/// Maps indices of a parent layout onto (kept, rest) sub-indices.
class IndexSplitter {
  public:
    IndexSplitter(const ModeLayout &parent, const ModeSet &first);
    [[nodiscard]] const ModeLayout &first() const { return first_; }
    [[nodiscard]] const ModeLayout &rest() const { return rest_; }
    [[nodiscard]] std::pair<index_t, index_t> split(index_t parent_index) const;
    [[nodiscard]] index_t                     join(index_t first_index, index_t rest_index) const;

  private:
    ModeLayout               parent_;
    ModeLayout               first_, rest_;
    std::vector<std::size_t> first_pos_, rest_pos_;
};

} // namespace tpg
