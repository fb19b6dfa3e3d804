# Command-line front end: analyze, plan, validate, min-uavs, sweep
