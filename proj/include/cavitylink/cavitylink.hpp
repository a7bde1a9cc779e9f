// SPDX-License-Identifier: Apache-2.0
//
// cavitylink - statistical characterization of MIMO channels in mode-stirred enclosures
// Copyright (C) 2026 cavitylink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CAVITYLINK_CAVITYLINK_HPP
#define CAVITYLINK_CAVITYLINK_HPP

#include "cavitylink/capacity_stats.hpp"
#include "cavitylink/cavity.hpp"
#include "cavitylink/channel.hpp"
#include "cavitylink/io.hpp"
#include "cavitylink/metrics.hpp"
#include "cavitylink/report.hpp"
#include "cavitylink/rng.hpp"
#include "cavitylink/stats.hpp"
#include "cavitylink/svg.hpp"

#endif
