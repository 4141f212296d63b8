// SPDX-License-Identifier: Apache-2.0
#include "jutap/q_network.hpp"

namespace jutap {

template class QNetwork<float>;
template class QNetwork<double>;

}  // namespace jutap
