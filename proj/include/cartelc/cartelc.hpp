/*
 * Copyright 2026 The cartelc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CARTELC_CARTELC_HPP_
#define CARTELC_CARTELC_HPP_

#include "cartelc/complexity.hpp"
#include "cartelc/criteria.hpp"
#include "cartelc/data.hpp"
#include "cartelc/errors.hpp"
#include "cartelc/evaluation.hpp"
#include "cartelc/geometry.hpp"
#include "cartelc/induction.hpp"
#include "cartelc/statistics.hpp"

#endif  // CARTELC_CARTELC_HPP_
