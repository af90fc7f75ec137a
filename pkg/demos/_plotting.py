"""Optional matplotlib output shared by the demos."""

import os

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # demos still print their numbers
    plt = None

OUT = os.environ.get("CRED_DEMO_OUT", "demo_output")


def save(fig, name):
    os.makedirs(OUT, exist_ok=True)
    path = os.path.join(OUT, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    print("wrote", path)


def show_images(images, titles, name):
    if plt is None:
        return
    fig, axes = plt.subplots(1, len(images), figsize=(3 * len(images), 3.2))
    for ax, img, title in zip(axes, images, titles):
        ax.imshow(img, cmap="gray", vmin=0, vmax=255)
        ax.set_title(title, fontsize=9)
        ax.axis("off")
    save(fig, name)
