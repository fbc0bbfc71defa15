#pragma once

#include <edgelab/random_spec.hpp>

namespace testsupport {

using edgelab::random_rational;
using edgelab::random_spec;

}  // namespace testsupport
