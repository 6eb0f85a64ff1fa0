"""Photo-absorption amplitudes for trapped ions in twisted light."""
