# Surveillance network: points, segments, climb ratios, distance to base
