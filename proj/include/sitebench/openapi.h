#ifndef SITEBENCH_OPENAPI_H_
#define SITEBENCH_OPENAPI_H_

#include "sitebench/json_codec.h"

namespace sitebench {

// OpenAPI 3.0 description of the /api/v1 routes. docs/openapi.json is this
// document dumped with two-space indentation.
const Json& OpenApiSpec();

}  // namespace sitebench

#endif  // SITEBENCH_OPENAPI_H_
