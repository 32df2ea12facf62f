#ifndef CTXLAB_VERSION_HPP
#define CTXLAB_VERSION_HPP

namespace ctxlab {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
