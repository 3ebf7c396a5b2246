// Copyright 2026 The geoind Authors
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

#ifndef GEOIND_GEOIND_HPP_
#define GEOIND_GEOIND_HPP_

#include "geoind/dataset.hpp"
#include "geoind/error.hpp"
#include "geoind/format.hpp"
#include "geoind/geo.hpp"
#include "geoind/mechanism.hpp"
#include "geoind/numerics.hpp"
#include "geoind/random.hpp"
#include "geoind/stats.hpp"

#endif  // GEOIND_GEOIND_HPP_
