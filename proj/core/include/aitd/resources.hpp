/*
 * Copyright 2026 The aitd Authors.
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

#ifndef AITD_RESOURCES_HPP_
#define AITD_RESOURCES_HPP_

#include <string_view>

namespace aitd::resources {

// Contents of resources/stopwords_en.txt (one term per line, '#' comments).
std::string_view stopwords_en();

// Contents of resources/paper-split.json, the published topic assignment.
std::string_view paper_split_manifest();

}  // namespace aitd::resources

#endif  // AITD_RESOURCES_HPP_
