#include "tpg/fock/layout.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "tpg/errors.hpp"

namespace tpg {

char to_char(Mode m) {
    switch(m) {
        case Mode::A: return 'A';
        case Mode::B: return 'B';
        case Mode::C: return 'C';
        case Mode::P: return 'P';
    }
    return '?';
}

Mode parse_mode(char c) {
    switch(c) {
        case 'A': case 'a': return Mode::A;
        case 'B': case 'b': return Mode::B;
        case 'C': case 'c': return Mode::C;
        case 'P': case 'p': return Mode::P;
        default: throw ConfigurationError(fmt::format("unknown mode label '{}'", c));
    }
}

ModeSet parse_modes(std::string_view labels) {
    ModeSet out;
    for(char c : labels) {
        if(c == ',' || c == ' ') continue;
        out.push_back(parse_mode(c));
    }
    return out;
}

std::string to_string(const ModeSet &modes) {
    std::string s;
    for(auto m : modes) s += to_char(m);
    return s;
}

ModeLayout::ModeLayout(std::vector<ModeSpec> modes) : modes_(std::move(modes)) {
    for(std::size_t i = 0; i < modes_.size(); ++i) {
        if(modes_[i].cutoff < 1)
            throw ConfigurationError(fmt::format("mode {} has cutoff {} (< 1)", to_char(modes_[i].label), modes_[i].cutoff));
        if(i > 0 && modes_[i - 1].label >= modes_[i].label)
            throw ConfigurationError("modes must be unique and listed in canonical order A, B, C, P");
    }
    strides_.assign(modes_.size(), 1);
    dim_ = 1;
    for(std::size_t i = modes_.size(); i-- > 0;) {
        strides_[i] = dim_;
        if(dim_ > std::numeric_limits<index_t>::max() / modes_[i].cutoff)
            throw ConfigurationError("layout dimension overflows 64-bit index");
        dim_ *= modes_[i].cutoff;
    }
}

ModeLayout ModeLayout::uniform(std::string_view labels, int cutoff) {
    std::vector<ModeSpec> specs;
    for(auto m : parse_modes(labels)) specs.push_back({m, cutoff});
    return ModeLayout(std::move(specs));
}

std::optional<std::size_t> ModeLayout::position(Mode m) const {
    for(std::size_t i = 0; i < modes_.size(); ++i)
        if(modes_[i].label == m) return i;
    return std::nullopt;
}

std::size_t ModeLayout::require(Mode m) const {
    if(auto p = position(m)) return *p;
    throw ConfigurationError(fmt::format("mode {} is not part of layout {}", to_char(m), describe()));
}

std::vector<int> ModeLayout::occupation(index_t index) const {
    std::vector<int> occ(modes_.size());
    for(std::size_t i = 0; i < modes_.size(); ++i) occ[i] = level(index, i);
    return occ;
}

index_t ModeLayout::index(std::span<const int> occupation) const {
    if(occupation.size() != modes_.size()) throw UsageError("occupation tuple has wrong length");
    index_t idx = 0;
    for(std::size_t i = 0; i < modes_.size(); ++i) {
        if(occupation[i] < 0 || occupation[i] >= modes_[i].cutoff) throw UsageError("occupation outside cutoff");
        idx += occupation[i] * strides_[i];
    }
    return idx;
}

ModeLayout ModeLayout::sublayout(const ModeSet &keep) const {
    std::vector<ModeSpec> specs;
    for(const auto &spec : modes_)
        if(std::find(keep.begin(), keep.end(), spec.label) != keep.end()) specs.push_back(spec);
    for(auto m : keep) (void)require(m);
    return ModeLayout(std::move(specs));
}

ModeLayout ModeLayout::scaled(int factor) const {
    auto specs = modes_;
    for(auto &s : specs) s.cutoff *= factor;
    return ModeLayout(std::move(specs));
}

ModeSet ModeLayout::labels() const {
    ModeSet out;
    for(const auto &s : modes_) out.push_back(s.label);
    return out;
}

std::string ModeLayout::describe() const {
    std::string s;
    for(std::size_t i = 0; i < modes_.size(); ++i) {
        if(i) s += ',';
        s += fmt::format("{}:{}", to_char(modes_[i].label), modes_[i].cutoff);
    }
    return s;
}

IndexSplitter::IndexSplitter(const ModeLayout &parent, const ModeSet &first) : parent_(parent) {
    if(first.empty()) throw UsageError("mode subset must be nonempty");
    first_ = parent.sublayout(first);
    ModeSet rest;
    for(std::size_t i = 0; i < parent.size(); ++i) {
        auto m = parent[i].label;
        if(first_.contains(m)) first_pos_.push_back(i);
        else {
            rest_pos_.push_back(i);
            rest.push_back(m);
        }
    }
    rest_ = rest.empty() ? ModeLayout() : parent.sublayout(rest);
}

std::pair<index_t, index_t> IndexSplitter::split(index_t parent_index) const {
    index_t a = 0, b = 0;
    for(std::size_t k = 0; k < first_pos_.size(); ++k) a += parent_.level(parent_index, first_pos_[k]) * first_.stride(k);
    for(std::size_t k = 0; k < rest_pos_.size(); ++k) b += parent_.level(parent_index, rest_pos_[k]) * rest_.stride(k);
    return {a, b};
}

index_t IndexSplitter::join(index_t first_index, index_t rest_index) const {
    index_t idx = 0;
    for(std::size_t k = 0; k < first_pos_.size(); ++k) idx += first_.level(first_index, k) * parent_.stride(first_pos_[k]);
    for(std::size_t k = 0; k < rest_pos_.size(); ++k) idx += rest_.level(rest_index, k) * parent_.stride(rest_pos_[k]);
    return idx;
}

} // namespace tpg
