// Implementation forthcoming.
