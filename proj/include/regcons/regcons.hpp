/*
 * Copyright (c) 2026, The regcons Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef REGCONS_REGCONS_HPP_
#define REGCONS_REGCONS_HPP_

#include "regcons/core.hpp"
#include "regcons/trace_io.hpp"
#include "regcons/registers.hpp"
#include "regcons/protocol.hpp"
#include "regcons/system.hpp"
#include "regcons/adversary.hpp"
#include "regcons/monitors.hpp"
#include "regcons/explorer.hpp"
#include "regcons/harness.hpp"

#endif  // REGCONS_REGCONS_HPP_
