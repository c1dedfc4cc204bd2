from .bvh import BVH, brute_force_overlap_pairs, build_bvh, self_overlap_pairs
from .intersect import SegClass, TriClass, segment_intersection, segment_meets_triangle, \
    triangle_intersection, triangles_meet
from .jacobian import Sign, SignCertificate, affine_certificate, bilinear_jacobian, \
    bilinear_jacobian_certificate, cell_certificate, trilinear_bernstein, trilinear_jacobian, \
    trilinear_jacobian_certificate
from .predicates import orient2d, orient2d_batch, orient3d, orient3d_batch
