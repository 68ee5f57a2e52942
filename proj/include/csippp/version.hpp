#pragma once

#define CSIPPP_VERSION "0.3.0"
