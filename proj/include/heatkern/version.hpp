// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_VERSION_HPP
#define HEATKERN_VERSION_HPP

namespace heatkern {

inline constexpr const char *kVersion = "0.1.0";

} // namespace heatkern

#endif
