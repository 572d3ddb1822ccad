#ifndef RABIPISTON_VERSION_HPP
#define RABIPISTON_VERSION_HPP

namespace rabipiston {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
