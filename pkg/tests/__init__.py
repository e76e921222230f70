# quadosc test suite
