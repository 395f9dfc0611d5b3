// include/asrpipe/version.hpp

// Copyright 2026 asrpipe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRPIPE_VERSION_HPP
#define ASRPIPE_VERSION_HPP

#define ASRPIPE_VERSION_MAJOR 0
#define ASRPIPE_VERSION_MINOR 1
#define ASRPIPE_VERSION_PATCH 0
#define ASRPIPE_VERSION_STRING "0.1.0"

namespace asrpipe {

inline const char* version() { return ASRPIPE_VERSION_STRING; }

}  // namespace asrpipe

#endif  // ASRPIPE_VERSION_HPP
