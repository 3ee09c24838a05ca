#pragma once

#define FAMDYN_VERSION "0.1.0"
