#include "hardybox/bell.hpp"

namespace hardybox {

std::array<ChshSigns, 8> all_chsh_signs() {
    std::array<ChshSigns, 8> out;
    for (int mask = 0; mask < 8; ++mask)
        out[static_cast<std::size_t>(mask)] = {(mask >> 2) & 1, (mask >> 1) & 1, mask & 1};
    return out;
}

}  // namespace hardybox
