#pragma once

#define POINTCOUPLE_VERSION "0.1.0"
