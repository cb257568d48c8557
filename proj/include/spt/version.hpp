#ifndef SPT_VERSION_HPP
#define SPT_VERSION_HPP

#define SPT_VERSION "1.0.0"

#endif
