from heegner_circles.circles import radii_up_to


def radii_within(fld, x):
    """radii_up_to with the below-minimal-height case mapped to []."""
    if x < fld.q / 2:
        return []
    return radii_up_to(fld, x)
