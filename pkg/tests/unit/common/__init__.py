# Unit tests for quadosc.common
