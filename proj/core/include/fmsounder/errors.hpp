// SPDX-License-Identifier: Apache-2.0
//
// fmsounder  FM-band channel sounding simulation and PDP modeling toolkit
// Copyright (C) 2026 The fmsounder authors
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

#ifndef fmsounder_errors_H
#define fmsounder_errors_H

#include <stdexcept>
#include <string>

namespace fmsounder
{

    // All library failures carry a stable machine-readable code (e.g.
    // "NonPrimitivePolynomial", "FormatError") plus a human message. The
    // category drives the CLI exit code: data -> 3, domain -> 4.
    class Error : public std::runtime_error
    {
      public:
        enum class Category
        {
            data,  // malformed files, schemas, parse failures
            domain // numeric/domain violations
        };

        Error(Category category, std::string code, const std::string &message)
            : std::runtime_error(code + ": " + message), category_(category), code_(std::move(code))
        {
        }

        Category category() const noexcept { return category_; }
        const std::string &code() const noexcept { return code_; }

      private:
        Category category_;
        std::string code_;
    };

    inline Error domain_error(std::string code, const std::string &message)
    {
        return Error(Error::Category::domain, std::move(code), message);
    }

    inline Error data_error(std::string code, const std::string &message)
    {
        return Error(Error::Category::data, std::move(code), message);
    }

} // namespace fmsounder

#endif
