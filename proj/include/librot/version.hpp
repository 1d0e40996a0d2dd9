#ifndef LIBROT_VERSION_HPP
#define LIBROT_VERSION_HPP

namespace librot {

inline constexpr const char* version_string = "librot 1.0.0";

}  // namespace librot

#endif  // LIBROT_VERSION_HPP
