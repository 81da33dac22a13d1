#include "tabtree/basis.hpp"

namespace tabtree {

std::string join_header(const std::string& source, const std::vector<std::string>& suffix_chain) {
    std::string out = source;
    for (const auto& s : suffix_chain) {
        out += kSeparator;
        out += s;
    }
    return out;
}

std::vector<std::string> FittedColumnBasis::output_headers() const {
    if (column_count <= 1) return {returned_header};
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(column_count));
    for (int i = 0; i < column_count; ++i) {
        out.push_back(returned_header + kSeparator + std::to_string(i));
    }
    return out;
}

}  // namespace tabtree
