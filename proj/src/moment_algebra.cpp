#include "photonstats/moment_algebra.hpp"

namespace photonstats {
}
