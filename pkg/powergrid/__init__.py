# DC power flow, outage distribution factors and performance indices
