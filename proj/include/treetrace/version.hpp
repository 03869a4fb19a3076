#pragma once

#define TREETRACE_VERSION "0.1.0"
