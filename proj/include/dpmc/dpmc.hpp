//
// Copyright 2026 The dpmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPMC_DPMC_HPP_
#define DPMC_DPMC_HPP_

#include "dpmc/calibration.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/matnorm.hpp"
#include "dpmc/matrix_io.hpp"
#include "dpmc/mechanisms.hpp"
#include "dpmc/rng.hpp"
#include "dpmc/scalar_gauss.hpp"
#include "dpmc/verification.hpp"
#include "dpmc/version.hpp"

#endif  // DPMC_DPMC_HPP_
